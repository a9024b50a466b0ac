// CLI front end; subcommands are wired in incrementally.
#include <cstdio>

int main() {
    std::puts("firey: placeholder");
    return 0;
}
