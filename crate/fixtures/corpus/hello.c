#include <stdio.h>

int main(void) {
  printf("hello, \"wasm\"\n");
  return 0;
}
