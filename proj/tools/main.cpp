#include "oschalf/cli.hpp"

int main(int argc, char** argv) { return oschalf::main_entry(argc, argv); }
