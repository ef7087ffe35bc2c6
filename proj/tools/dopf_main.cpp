#include <cstdio>

int main() {
    std::puts("dopf: command-line interface not wired up yet");
    return 2;
}
