#include "pfedgame/cli.hpp"

int main(int argc, char** argv) { return pfedgame::cli_main(argc, argv); }
