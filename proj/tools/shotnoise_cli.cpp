#include "shotnoise/cli_io.hpp"

int main(int argc, char** argv) { return shotnoise::cli_main(argc, argv); }
