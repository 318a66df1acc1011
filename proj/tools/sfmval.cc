#include "sfmval/cli/commands.h"

int main(int argc, char** argv) { return sfmval::RunCli(argc, argv); }
