#include <cstdio>

int main() {
    std::puts("routeopt: placeholder");
    return 0;
}
