#include <stdio.h>

void shift(char *s, int k) {
  int i;
  for (i = 0; s[i]; i++) {
    if (s[i] >= 'a' && s[i] <= 'z') {
      s[i] = 'a' + (s[i] - 'a' + k) % 26;
    }
  }
}

int main(void) {
  char msg[32];
  const char *plain = "attack at dawn";
  int i;
  int round;
  for (i = 0; plain[i]; i++) {
    msg[i] = plain[i];
  }
  msg[i] = 0;
  for (round = 0; round < 3; round++) {
    shift(msg, 13);
    printf("%d: %s\n", round, msg);
  }
  return 0;
}
