#include "rcs/cli.hpp"

int main(int argc, char** argv) { return rcs::dispatch(argc, argv); }
