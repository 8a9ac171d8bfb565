#include "commands.hpp"

int main(int argc, char** argv) { return lseval::cli::main(argc, argv); }
