#include <cstdio>

#include "speclab/version.hpp"

int main() {
    std::printf("speclab %s\n", speclab::version_string);
    return 0;
}
