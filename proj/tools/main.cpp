#include "fjmask/cli.hpp"

int main(int argc, char** argv) { return fjmask::run_cli(argc, argv); }
