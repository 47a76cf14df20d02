import os
import sys

# In-tree runs (ctest) point NFV_CORE_DIR at the built extension; installed
# wheels import the package directly instead.
core_dir = os.environ.get("NFV_CORE_DIR")
if core_dir and core_dir not in sys.path:
    sys.path.insert(0, core_dir)
