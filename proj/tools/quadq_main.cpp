#include "quadq/harness.hpp"

int main(int argc, char** argv) { return quadq::cli_main(argc, argv); }
