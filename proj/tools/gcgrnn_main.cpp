#include "gcgrnn/cli.hpp"

int main(int argc, char** argv) { return gcgrnn::cli::run(argc, argv); }
