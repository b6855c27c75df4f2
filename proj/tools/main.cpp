#include "paneitz_cli/app.hpp"

int main(int argc, char** argv) { return paneitz::cli::run_cli(argc, argv); }
