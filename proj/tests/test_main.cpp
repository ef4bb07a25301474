#define DOCTEST_CONFIG_IMPLEMENT
#include <string>
#include <vector>

#include "doctest.h"

// Path of the command-line binary under test, injected by ctest so the CLI
// cases run against the freshly built tool.
std::string g_cli_path;

int main(int argc, char** argv) {
    std::vector<const char*> args;
    for (int i = 0; i < argc; ++i) {
        if (std::string(argv[i]) == "--cli-path" && i + 1 < argc) {
            g_cli_path = argv[++i];
            continue;
        }
        args.push_back(argv[i]);
    }
    doctest::Context context(static_cast<int>(args.size()), args.data());
    return context.run();
}
