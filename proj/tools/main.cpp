#include <iostream>

#include "symkern/expr.hpp"

int main() {
    std::cout << "symkern (work in progress)\n";
    return 0;
}
