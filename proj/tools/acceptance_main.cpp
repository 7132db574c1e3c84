#include <iostream>

#include "resfin/acceptance.hpp"

int main() {
    int fails = resfin::run_acceptance(std::cout);
    return fails == 0 ? 0 : 1;
}
