#ifndef O2_CLI_HPP
#define O2_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace o2cli {

// Runs one o2 command. Exit code 0 on success, 1 on validation or
// computation failure, 2 on usage errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace o2cli

#endif
