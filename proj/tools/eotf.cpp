#include "eotf/cli/commands.hpp"

int main(int argc, char** argv) { return eotf::cli::main_entry(argc, argv); }
