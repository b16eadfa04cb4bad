#include "monoqt/cli.hpp"

int main(int argc, char** argv) {
    return monoqt::run_cli(argc, argv);
}
