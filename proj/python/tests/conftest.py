import os
import sys

# The compiled module lands in the CMake build tree; ctest points here.
module_dir = os.environ.get("CRSP_MODULE_DIR")
if module_dir:
    sys.path.insert(0, module_dir)
