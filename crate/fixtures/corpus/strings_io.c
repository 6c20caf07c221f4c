#include <stdio.h>

int length(const char *s) {
  int n = 0;
  while (s[n]) {
    n++;
  }
  return n;
}

int count_quotes(const char *s) {
  int q = 0;
  int i;
  for (i = 0; s[i]; i++) {
    if (s[i] == '"') {
      q++;
    }
  }
  return q;
}

int main(void) {
  const char *text = "She said \"hi\"\nand left.\n";
  printf("%s", text);
  printf("length=%d quotes=%d\n", length(text), count_quotes(text));
  return 0;
}
