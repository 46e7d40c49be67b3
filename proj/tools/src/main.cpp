#include "cli.hpp"

int main(int argc, char** argv) { return lexbias::cli::run({argv, argv + argc}); }
