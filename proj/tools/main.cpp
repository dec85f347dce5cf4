#include "sparda/cli.hpp"

int main(int argc, char** argv)
{
    return sparda::cli::run(argc, argv);
}
