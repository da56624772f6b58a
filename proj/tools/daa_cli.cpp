// Command-line front end: scan, forge, stress-forge, sweep, bench,
// stress-eval and gen-corpus subcommands over the daa library.

#include <cstdio>
#include <iostream>

int main() {
    std::puts("placeholder");
    return 0;
}
