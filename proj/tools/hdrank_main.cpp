#include "hdrank/commands.hpp"

int main(int argc, char** argv) { return hdrank::run_cli(argc, argv); }
