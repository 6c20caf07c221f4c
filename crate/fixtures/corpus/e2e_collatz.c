int collatz_len(int n) {
  int steps = 0;
  while (n != 1) {
    if (n % 2 == 0) {
      n = n / 2;
    } else {
      n = 3 * n + 1;
    }
    steps++;
  }
  return steps;
}

int longest(int limit) {
  int best = 0;
  int arg = 1;
  int i;
  int len;
  for (i = 1; i <= limit; i++) {
    len = collatz_len(i);
    if (len <= best) {
      continue;
    }
    best = len;
    arg = i;
  }
  return arg;
}

int main(void) {
  return longest(30);
}
