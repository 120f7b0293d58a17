#pragma once

namespace bmkit {

/// Exit codes: 0 success, 1 failed checks, 2 usage or parse error, 3 precondition violation.
int cli_main(int argc, char** argv);

}  // namespace bmkit
