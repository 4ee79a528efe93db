#include "tracksketch/cli.hpp"

int main(int argc, char** argv) { return tracksketch::dispatch(argc, argv); }
