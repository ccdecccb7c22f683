#include "test_support.hpp"

#include <unistd.h>

namespace lanecurate::testing {

long TempDir::getpid_wrapper() { return static_cast<long>(::getpid()); }

}  // namespace lanecurate::testing
