#include "colearn/cli.hpp"

int main(int argc, char** argv) { return colearn::run_cli(argc, argv); }
