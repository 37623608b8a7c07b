#include "pairtime/cli.hpp"

int main(int argc, char** argv)
{
	return pairtime::cli::run(argc, argv);
}
