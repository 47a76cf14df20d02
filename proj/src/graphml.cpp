#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "nfv/scenario_io.hpp"

// Hand-rolled parser for the GraphML subset the importer needs: <key>
// declarations, <node>/<edge> elements, and numeric <data> children. Not a
// general XML parser; attribute values must be double-quoted.

namespace nfv {

namespace {

struct Tag {
  std::string name;
  std::map<std::string, std::string> attrs;
  bool closing = false;       // </name>
  bool self_closing = false;  // <name ... />
  std::string text_after;     // text between this tag and the next
};

std::vector<Tag> tokenize(const std::string& xml) {
  std::vector<Tag> tags;
  size_t pos = 0;
  while ((pos = xml.find('<', pos)) != std::string::npos) {
    if (xml.compare(pos, 4, "<!--") == 0) {
      size_t end = xml.find("-->", pos);
      if (end == std::string::npos) throw ParseError("graphml: unterminated comment");
      pos = end + 3;
      continue;
    }
    if (xml.compare(pos, 2, "<?") == 0) {
      size_t end = xml.find("?>", pos);
      if (end == std::string::npos) throw ParseError("graphml: unterminated declaration");
      pos = end + 2;
      continue;
    }
    size_t end = xml.find('>', pos);
    if (end == std::string::npos) throw ParseError("graphml: unterminated tag");
    std::string body = xml.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    Tag tag;
    if (!body.empty() && body.front() == '/') {
      tag.closing = true;
      body.erase(0, 1);
    }
    if (!body.empty() && body.back() == '/') {
      tag.self_closing = true;
      body.pop_back();
    }
    size_t i = 0;
    while (i < body.size() && !std::isspace((unsigned char)body[i])) ++i;
    tag.name = body.substr(0, i);
    while (i < body.size()) {
      while (i < body.size() && std::isspace((unsigned char)body[i])) ++i;
      size_t eq = body.find('=', i);
      if (eq == std::string::npos) break;
      std::string key = body.substr(i, eq - i);
      while (!key.empty() && std::isspace((unsigned char)key.back())) key.pop_back();
      size_t q1 = body.find('"', eq);
      if (q1 == std::string::npos) throw ParseError("graphml: unquoted attribute " + key);
      size_t q2 = body.find('"', q1 + 1);
      if (q2 == std::string::npos) throw ParseError("graphml: unterminated attribute " + key);
      tag.attrs[key] = body.substr(q1 + 1, q2 - q1 - 1);
      i = q2 + 1;
    }
    size_t next = xml.find('<', pos);
    tag.text_after = xml.substr(pos, (next == std::string::npos ? xml.size() : next) - pos);
    tags.push_back(std::move(tag));
  }
  return tags;
}

double parse_number(const std::string& text, const std::string& where) {
  try {
    size_t used = 0;
    double v = std::stod(text, &used);
    return v;
  } catch (...) {
    throw ParseError("graphml: non-numeric value '" + text + "' in " + where);
  }
}

}  // namespace

SubstrateNetwork parse_graphml(const std::string& xml_text, const ResourceProfile& defaults) {
  auto tags = tokenize(xml_text);
  // key id -> attr.name, to resolve <data key="d3"> back to a named attribute
  std::map<std::string, std::string> key_names;
  SubstrateNetwork net;
  net.bandwidth_fee = defaults.bandwidth_fee;

  bool directed_default = false;
  struct PendingEdge {
    std::string source, target;
    std::map<std::string, double> attrs;
  };
  std::vector<PendingEdge> edges;

  enum class In { None, Node, Edge } scope = In::None;
  PhysicalNode* cur_node = nullptr;
  PendingEdge* cur_edge = nullptr;

  for (size_t k = 0; k < tags.size(); ++k) {
    Tag& t = tags[k];
    if (t.closing) {
      if (t.name == "node" || t.name == "edge") scope = In::None;
      continue;
    }
    if (t.name == "key") {
      auto it = t.attrs.find("id");
      auto nm = t.attrs.find("attr.name");
      if (it != key_names.end() || true) {
        if (it != t.attrs.end() && nm != t.attrs.end()) key_names[it->second] = nm->second;
      }
    } else if (t.name == "graph") {
      auto ed = t.attrs.find("edgedefault");
      directed_default = ed != t.attrs.end() && ed->second == "directed";
    } else if (t.name == "node") {
      auto id = t.attrs.find("id");
      if (id == t.attrs.end()) throw ParseError("graphml: node without id");
      PhysicalNode n;
      n.id = id->second;
      n.cpu_capacity = defaults.cpu;
      n.mem_capacity = defaults.mem;
      n.strg_capacity = defaults.strg;
      n.hypervisor_rate = defaults.mu_n;
      n.activation_cost = defaults.sigma;
      net.nodes.push_back(n);
      if (!t.self_closing) {
        scope = In::Node;
        cur_node = &net.nodes.back();
      }
    } else if (t.name == "edge") {
      auto sit = t.attrs.find("source");
      auto tit = t.attrs.find("target");
      if (sit == t.attrs.end() || tit == t.attrs.end())
        throw ParseError("graphml: edge without source/target");
      edges.push_back({sit->second, tit->second, {}});
      if (!t.self_closing) {
        scope = In::Edge;
        cur_edge = &edges.back();
      }
    } else if (t.name == "data" && scope != In::None) {
      auto kit = t.attrs.find("key");
      if (kit == t.attrs.end()) continue;
      std::string name = key_names.count(kit->second) ? key_names[kit->second] : kit->second;
      std::string text = t.text_after;
      // strip surrounding whitespace
      while (!text.empty() && std::isspace((unsigned char)text.front())) text.erase(0, 1);
      while (!text.empty() && std::isspace((unsigned char)text.back())) text.pop_back();
      if (scope == In::Node && cur_node) {
        if (name == "cpu") cur_node->cpu_capacity = parse_number(text, "node " + cur_node->id);
        else if (name == "mem") cur_node->mem_capacity = parse_number(text, "node " + cur_node->id);
        else if (name == "strg") cur_node->strg_capacity = parse_number(text, "node " + cur_node->id);
        else if (name == "mu_n") cur_node->hypervisor_rate = parse_number(text, "node " + cur_node->id);
        else if (name == "sigma") cur_node->activation_cost = parse_number(text, "node " + cur_node->id);
      } else if (scope == In::Edge && cur_edge) {
        if (name == "capacity" || name == "delay")
          cur_edge->attrs[name] = parse_number(text, "edge");
      }
    }
  }

  for (const auto& e : edges) {
    int a = net.node_index(e.source);
    int b = net.node_index(e.target);
    if (a < 0) throw ParseError("graphml: edge references undeclared node " + e.source);
    if (b < 0) throw ParseError("graphml: edge references undeclared node " + e.target);
    PhysicalLink l;
    l.from = a;
    l.to = b;
    l.capacity = e.attrs.count("capacity") ? e.attrs.at("capacity") : defaults.link_capacity;
    l.prop_delay = e.attrs.count("delay") ? e.attrs.at("delay") : defaults.link_delay;
    net.links.push_back(l);
    if (!directed_default) {
      std::swap(l.from, l.to);
      net.links.push_back(l);
    }
  }
  net.check();
  return net;
}

SubstrateNetwork import_graphml(const std::string& path, const ResourceProfile& defaults) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graphml(ss.str(), defaults);
}

}  // namespace nfv
