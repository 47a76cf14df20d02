#include "nfv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nfv/delay.hpp"
#include "nfv/errors.hpp"
#include "nfv/exact.hpp"
#include "nfv/mldg.hpp"
#include "nfv/scenario_io.hpp"
#include "nfv/validate.hpp"

namespace nfv {

namespace {

using nlohmann::json;

// 24-PoP European backbone, 37 undirected edges; mirrors data/bteurope.graphml
// so built-in generation does not depend on the working directory.
const char* kBtEuropeNodes[24] = {
    "London",  "Dublin",    "Amsterdam", "Brussels", "Paris",    "Frankfurt",
    "Hamburg", "Copenhagen", "Stockholm", "Oslo",     "Helsinki", "Warsaw",
    "Prague",  "Vienna",    "Budapest",  "Munich",   "Zurich",   "Geneva",
    "Milan",   "Rome",      "Barcelona", "Madrid",   "Lisbon",   "NewYork"};
const int kBtEuropeEdges[37][2] = {
    {0, 1},   {0, 2},   {0, 4},   {0, 3},   {0, 23},  {1, 23},  {2, 3},
    {2, 6},   {2, 5},   {3, 4},   {3, 5},   {4, 17},  {4, 20},  {4, 21},
    {5, 6},   {5, 15},  {5, 12},  {5, 16},  {6, 7},   {7, 8},   {7, 9},
    {8, 9},   {8, 10},  {10, 11}, {11, 12}, {12, 13}, {13, 14}, {13, 15},
    {14, 11}, {15, 16}, {16, 17}, {16, 18}, {18, 19}, {18, 17}, {19, 20},
    {20, 21}, {21, 22}};

void add_undirected(SubstrateNetwork& net, int a, int b, double cap,
                    double delay) {
  net.links.push_back({a, b, cap, delay});
  net.links.push_back({b, a, cap, delay});
}

void add_type(Scenario& s, const char* id, double cpu, double strg, double mem,
              double mu, double lic) {
  VnfType t;
  t.id = id;
  t.cpu_req = cpu;
  t.strg_req = strg;
  t.mem_req = mem;
  t.service_rate = mu;
  t.license_cost = lic;
  s.types.push_back(t);
}

void add_chains(Scenario& s, const ScenarioTemplate& tmpl, std::mt19937& rng,
                int def_len, double def_flow, double def_th,
                double flat_revenue) {
  int len = tmpl.sfc_length > 0 ? tmpl.sfc_length : def_len;
  double flow = tmpl.flow_rate > 0 ? tmpl.flow_rate : def_flow;
  double th = tmpl.delay_threshold > 0 ? tmpl.delay_threshold : def_th;
  std::uniform_int_distribution<int> pick_type(0, (int)s.types.size() - 1);
  for (int r = 0; r < tmpl.num_sfcs; ++r) {
    SfcRequest req;
    req.id = std::to_string(r);
    for (int u = 0; u < len; ++u) req.vnf_types.push_back(pick_type(rng));
    req.flow_rate = flow;
    req.link_bandwidths.assign(len - 1, flow);
    if (tmpl.revenue > 0)
      req.revenue = tmpl.revenue;
    else if (flat_revenue > 0)
      req.revenue = flat_revenue;
    else  // bteurope rule: 3000 L + 15 f (L - 1)
      req.revenue = 3000.0 * len + 15.0 * flow * (len - 1);
    req.delay_threshold = th;
    s.requests.push_back(req);
  }
}

Scenario make_small6(const ScenarioTemplate& tmpl, std::mt19937& rng) {
  Scenario s;
  std::uniform_real_distribution<double> cpu(220, 260);
  for (int i = 0; i < 6; ++i) {
    PhysicalNode n;
    n.id = std::string(1, char('A' + i));
    n.cpu_capacity = cpu(rng);
    n.mem_capacity = 1000;
    n.strg_capacity = 4000;
    n.hypervisor_rate = 2000;
    n.activation_cost = 1000;
    s.substrate.nodes.push_back(n);
  }
  // ring plus two diagonals; every pair is at most two hops apart
  const int edges[8][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 4},
                           {4, 5}, {5, 0}, {0, 3}, {1, 4}};
  for (auto& e : edges) add_undirected(s.substrate, e[0], e[1], 1000, 1e-6);
  s.substrate.bandwidth_fee = 10;
  add_type(s, "1", 80, 200, 160, 100, 500);
  add_type(s, "2", 50, 250, 100, 100, 600);
  add_type(s, "3", 50, 250, 100, 100, 700);
  add_type(s, "4", 60, 300, 120, 100, 500);
  // queuing-calibrated threshold default: instance queues alone contribute
  // tens of milliseconds at mu_t = 100
  add_chains(s, tmpl, rng, 3, 30, 0.3, 9000);
  return s;
}

Scenario make_bteurope_like(const ScenarioTemplate& tmpl, std::mt19937& rng,
                            SubstrateNetwork net) {
  Scenario s;
  s.substrate = std::move(net);
  s.fixed_delay = true;
  s.fixed_node_delay = 3e-6;
  add_type(s, "1", 4, 90, 16, 450, 2000);
  add_type(s, "2", 7, 90, 24, 500, 2200);
  add_type(s, "3", 6, 120, 32, 400, 1800);
  add_type(s, "4", 5, 100, 24, 450, 2500);
  add_chains(s, tmpl, rng, 4, 100, 3e-6, -1);
  return s;
}

SubstrateNetwork builtin_bteurope() {
  SubstrateNetwork net;
  ResourceProfile p;
  for (const char* id : kBtEuropeNodes) {
    PhysicalNode n;
    n.id = id;
    n.cpu_capacity = p.cpu;
    n.mem_capacity = p.mem;
    n.strg_capacity = p.strg;
    n.hypervisor_rate = p.mu_n;
    n.activation_cost = p.sigma;
    net.nodes.push_back(n);
  }
  for (auto& e : kBtEuropeEdges)
    add_undirected(net, e[0], e[1], p.link_capacity, p.link_delay);
  net.bandwidth_fee = p.bandwidth_fee;
  return net;
}

Scenario make_tiny(const ScenarioTemplate& tmpl, std::mt19937& rng) {
  auto real = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  auto integer = [&](int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(rng);
  };
  Scenario s;
  int nodes = integer(2, 3);
  for (int i = 0; i < nodes; ++i) {
    PhysicalNode n;
    n.id = std::string(1, char('A' + i));
    n.cpu_capacity = real(150, 250);
    n.mem_capacity = 600;
    n.strg_capacity = 1200;
    n.hypervisor_rate = real(800, 1500);
    n.activation_cost = real(0, 100);
    s.substrate.nodes.push_back(n);
  }
  for (int i = 0; i < nodes; ++i)
    for (int j = i + 1; j < nodes; ++j)
      add_undirected(s.substrate, i, j, real(200, 400), real(1e-4, 1e-3));
  s.substrate.bandwidth_fee = real(0, 0.5);
  for (int t = 0; t < 2; ++t) {
    VnfType ty;
    ty.id = std::to_string(t + 1);
    ty.cpu_req = real(50, 90);
    ty.mem_req = 100;
    ty.strg_req = 200;
    ty.service_rate = real(80, 150);
    ty.license_cost = real(50, 150);
    ty.max_instances = integer(1, 2);
    s.types.push_back(ty);
  }
  int chains = tmpl.num_sfcs > 0 ? std::min(tmpl.num_sfcs, 3) : integer(1, 3);
  for (int r = 0; r < chains; ++r) {
    SfcRequest req;
    req.id = std::to_string(r);
    int len = tmpl.sfc_length > 0 ? std::min(tmpl.sfc_length, 3)
                                  : integer(1, 3);
    for (int u = 0; u < len; ++u) req.vnf_types.push_back(integer(0, 1));
    req.flow_rate = real(10, 40);
    req.link_bandwidths.assign(len - 1, req.flow_rate);
    req.revenue = real(300, 1200);
    req.delay_threshold = real(0.05, 0.3);
    s.requests.push_back(req);
  }
  return s;
}

}  // namespace

Scenario generate_scenario(const ScenarioTemplate& tmpl, unsigned seed) {
  std::mt19937 rng(seed);
  Scenario s;
  if (tmpl.topology == "small6") {
    s = make_small6(tmpl, rng);
  } else if (tmpl.topology == "bteurope") {
    s = make_bteurope_like(tmpl, rng, builtin_bteurope());
  } else if (tmpl.topology == "tiny") {
    s = make_tiny(tmpl, rng);
  } else if (tmpl.topology == "graphml") {
    s = make_bteurope_like(tmpl, rng,
                           import_graphml(tmpl.graphml_path, {}));
  } else {
    throw ValidationError("topology", "unknown template: " + tmpl.topology);
  }
  s.theta = tmpl.theta;
  s.check();
  return s;
}

void SweepSpec::check() const {
  if (axis != "num_sfcs" && axis != "sfc_length" && axis != "theta")
    throw ValidationError("axis", "must be num_sfcs, sfc_length or theta");
  if (values.empty()) throw ValidationError("values", "must be non-empty");
  if (seeds.empty()) throw ValidationError("seeds", "must be non-empty");
  if (solvers.empty()) throw ValidationError("solvers", "must be non-empty");
  for (const auto& so : solvers)
    if (so != "mldg" && so != "absa" && so != "exact")
      throw ValidationError("solvers", "unknown solver: " + so);
  // enumeration blow-up guard: the exact solver is desk-scale only
  if (std::count(solvers.begin(), solvers.end(), "exact") &&
      tmpl.topology == "bteurope")
    throw ValidationError("solvers", "exact is not supported on bteurope");
  if (jobs < 1) throw ValidationError("jobs", "must be >= 1");
}

SweepSpec parse_sweep_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("sweep spec: ") + e.what());
  }
  SweepSpec sp;
  sp.axis = j.value("axis", sp.axis);
  for (const auto& v : j.value("values", json::array()))
    sp.values.push_back(v.get<double>());
  for (const auto& v : j.value("seeds", json::array()))
    sp.seeds.push_back(v.get<unsigned>());
  for (const auto& v : j.value("solvers", json::array()))
    sp.solvers.push_back(v.get<std::string>());
  if (j.contains("template")) {
    const json& t = j["template"];
    sp.tmpl.topology = t.value("topology", sp.tmpl.topology);
    sp.tmpl.graphml_path = t.value("graphml_path", sp.tmpl.graphml_path);
    sp.tmpl.num_sfcs = t.value("num_sfcs", sp.tmpl.num_sfcs);
    sp.tmpl.sfc_length = t.value("sfc_length", sp.tmpl.sfc_length);
    sp.tmpl.theta = t.value("theta", sp.tmpl.theta);
    sp.tmpl.flow_rate = t.value("flow_rate", sp.tmpl.flow_rate);
    sp.tmpl.revenue = t.value("revenue", sp.tmpl.revenue);
    sp.tmpl.delay_threshold =
        t.value("delay_threshold", sp.tmpl.delay_threshold);
  }
  sp.gap = j.value("gap", sp.gap);
  sp.time_limit = j.value("time_limit", sp.time_limit);
  sp.jobs = j.value("jobs", sp.jobs);
  if (j.contains("absa")) {
    const json& a = j["absa"];
    sp.absa.initial_temperature =
        a.value("initial_temperature", sp.absa.initial_temperature);
    sp.absa.cooling_rate = a.value("cooling_rate", sp.absa.cooling_rate);
    sp.absa.lambda_param = a.value("lambda_param", sp.absa.lambda_param);
    sp.absa.max_iterations = a.value("max_iterations", sp.absa.max_iterations);
  }
  sp.check();
  return sp;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sweep spec: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_spec(ss.str());
}

namespace {

std::string csv_escape(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '"') c = ';';
  return out;
}

std::string record_row(const RunRecord& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.solver << ',' << r.axis_value << ',' << r.seed << ',' << r.gain
     << ',' << r.acceptance_rate << ',' << r.wall_time << ','
     << (r.failed ? "failed" : "ok") << ',' << csv_escape(r.error);
  return os.str();
}

RunRecord run_one(const SweepSpec& spec, const std::string& solver,
                  double value, unsigned seed) {
  RunRecord rec;
  rec.solver = solver;
  rec.axis_value = value;
  rec.seed = seed;
  auto t0 = std::chrono::steady_clock::now();
  try {
    ScenarioTemplate tmpl = spec.tmpl;
    if (spec.axis == "num_sfcs")
      tmpl.num_sfcs = (int)std::lround(value);
    else if (spec.axis == "sfc_length")
      tmpl.sfc_length = (int)std::lround(value);
    else
      tmpl.theta = value;
    Scenario s = generate_scenario(tmpl, seed);

    Deployment d;
    ValidateOptions vopt;
    vopt.delay = scenario_delay_options(s);
    if (solver == "mldg") {
      d = run_mldg(s).deployment;
    } else if (solver == "absa") {
      AnnealConfig cfg = spec.absa;
      cfg.seed = seed;
      d = run_absa(s, cfg).deployment;
      vopt.delay.mode = DelayMode::Fixed;
      vopt.delay.fixed_node_delay = s.fixed_node_delay;
    } else {
      ExactResult ex = solve_exact(s, spec.gap, spec.time_limit);
      d = ex.deployment;
    }

    ViolationReport vr = validate(s, d, vopt);
    if (!vr.feasible())
      throw ValidationError("deployment", "solver output failed validation");
    rec.gain = economics(s, d, vopt).gain();
    int accepted = 0;
    for (int r = 0; r < (int)s.requests.size(); ++r)
      if (d.accepted[r]) {
        ++accepted;
        rec.delay_margins.push_back(s.requests[r].delay_threshold -
                                    chain_delay(s, d, r, vopt.delay).total());
      }
    rec.acceptance_rate =
        s.requests.empty() ? 0 : (double)accepted / (double)s.requests.size();
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

}  // namespace

std::vector<RunRecord> run_sweep(const SweepSpec& spec,
                                 const std::string& csv_path) {
  spec.check();
  std::vector<RunRecord> done;
  std::set<std::string> done_keys;
  auto key = [](const std::string& solver, double value, unsigned seed) {
    std::ostringstream os;
    os.precision(17);
    os << solver << '|' << value << '|' << seed;
    return os.str();
  };

  if (!csv_path.empty()) {
    std::ifstream in(csv_path);
    std::string line;
    bool header = true;
    while (in && std::getline(in, line)) {
      if (header) {
        header = false;
        continue;
      }
      std::istringstream ls(line);
      RunRecord r;
      std::string field;
      if (!std::getline(ls, r.solver, ',')) continue;
      std::getline(ls, field, ',');
      r.axis_value = std::stod(field);
      std::getline(ls, field, ',');
      r.seed = (unsigned)std::stoul(field);
      std::getline(ls, field, ',');
      r.gain = std::stod(field);
      std::getline(ls, field, ',');
      r.acceptance_rate = std::stod(field);
      std::getline(ls, field, ',');
      r.wall_time = std::stod(field);
      std::getline(ls, field, ',');
      r.failed = field == "failed";
      std::getline(ls, r.error, ',');
      done_keys.insert(key(r.solver, r.axis_value, r.seed));
      done.push_back(std::move(r));
    }
  }

  struct Task {
    std::string solver;
    double value;
    unsigned seed;
  };
  std::vector<Task> tasks;
  for (const auto& solver : spec.solvers)
    for (double value : spec.values)
      for (unsigned seed : spec.seeds)
        if (!done_keys.count(key(solver, value, seed)))
          tasks.push_back({solver, value, seed});

  std::vector<RunRecord> fresh(tasks.size());
  std::atomic<size_t> next{0};
  std::mutex io_mutex;
  std::ofstream out;
  if (!csv_path.empty()) {
    bool write_header = done.empty() && done_keys.empty();
    out.open(csv_path, std::ios::app);
    if (!out) throw ParseError("cannot open sweep output: " + csv_path);
    if (write_header)
      out << "solver,axis_value,seed,gain,acceptance_rate,wall_time,status,"
             "error\n";
  }

  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      RunRecord rec =
          run_one(spec, tasks[i].solver, tasks[i].value, tasks[i].seed);
      std::lock_guard<std::mutex> lk(io_mutex);
      if (out.is_open()) out << record_row(rec) << '\n' << std::flush;
      fresh[i] = std::move(rec);
    }
  };
  int jobs = std::min<int>(spec.jobs, std::max<size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (auto& r : fresh) done.push_back(std::move(r));
  return done;
}

void report(const std::vector<RunRecord>& records, const std::string& format,
            std::ostream& out, const std::string& axis) {
  struct Agg {
    int n = 0;
    double gain_sum = 0, gain_sq = 0, acc_sum = 0;
  };
  std::map<std::pair<std::string, double>, Agg> aggs;
  for (const auto& r : records) {
    if (r.failed) continue;
    Agg& a = aggs[{r.solver, r.axis_value}];
    ++a.n;
    a.gain_sum += r.gain;
    a.gain_sq += r.gain * r.gain;
    a.acc_sum += r.acceptance_rate;
  }
  auto stddev = [](const Agg& a) {
    if (a.n < 2) return 0.0;
    double mean = a.gain_sum / a.n;
    return std::sqrt(std::max(0.0, a.gain_sq / a.n - mean * mean));
  };

  if (format == "csv") {
    out << "solver,axis,axis_value,seed,gain,acceptance_rate,wall_time,status"
        << '\n';
    std::ostringstream os;
    for (const auto& r : records) {
      out.precision(17);
      out << r.solver << ',' << axis << ',' << r.axis_value << ',' << r.seed
          << ',' << r.gain << ',' << r.acceptance_rate << ',' << r.wall_time
          << ',' << (r.failed ? "failed" : "ok") << '\n';
    }
    out << "\nsolver,axis_value,n,mean_gain,stddev_gain,mean_acceptance\n";
    for (const auto& [k, a] : aggs)
      out << k.first << ',' << k.second << ',' << a.n << ','
          << a.gain_sum / a.n << ',' << stddev(a) << ',' << a.acc_sum / a.n
          << '\n';
  } else if (format == "json") {
    json j;
    j["records"] = json::array();
    for (const auto& r : records)
      j["records"].push_back({{"solver", r.solver},
                              {"axis", axis},
                              {"axis_value", r.axis_value},
                              {"seed", r.seed},
                              {"gain", r.gain},
                              {"acceptance_rate", r.acceptance_rate},
                              {"wall_time", r.wall_time},
                              {"status", r.failed ? "failed" : "ok"},
                              {"error", r.error}});
    j["aggregates"] = json::array();
    for (const auto& [k, a] : aggs)
      j["aggregates"].push_back({{"solver", k.first},
                                 {"axis_value", k.second},
                                 {"n", a.n},
                                 {"mean_gain", a.gain_sum / a.n},
                                 {"stddev_gain", stddev(a)},
                                 {"mean_acceptance", a.acc_sum / a.n}});
    out << j.dump(2) << '\n';
  } else {
    throw ValidationError("format", "must be csv or json");
  }
}

}  // namespace nfv
