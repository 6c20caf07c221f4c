int sum_to(int n) {
  int s = 0;
  int i;
  for (i = 0; i < n; i++) {
    s += i;
  }
  return s;
}

int main(void) {
  int total = 0;
  int j;
  int k;
  for (j = 0; j < 4; j++) {
    for (k = 0; k < 3; k++) {
      total += sum_to(j + k);
    }
  }
  return total % 256;
}
