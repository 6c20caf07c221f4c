#include <stdio.h>

int main(void) {
  printf("greetings\n");
  return 0;
}
