#include <cstdio>

int main() {
  std::puts("bft: command-line interface not wired up yet");
  return 1;
}
