#include "commands.hpp"

int main(int argc, char** argv) { return scatlin::cli::run(argc, argv); }
