#include "tapdrag/cli.hpp"

int main(int argc, char** argv) { return tapdrag::cli_dispatch(argc, argv); }
