#include "degspec/cli/run.hpp"

int main(int argc, char** argv)
{
    return degspec::cli::run_command(argc, argv);
}
