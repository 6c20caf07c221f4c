#include <stdio.h>

int paths(int w, int h) {
  int grid[6][6];
  int x;
  int y;
  for (y = 0; y < h; y++) {
    for (x = 0; x < w; x++) {
      if (x == 0 || y == 0) {
        grid[y][x] = 1;
      } else {
        grid[y][x] = grid[y - 1][x] + grid[y][x - 1];
      }
    }
  }
  return grid[h - 1][w - 1];
}

int main(void) {
  int w;
  int h;
  for (h = 1; h <= 4; h++) {
    for (w = 1; w <= 4; w++) {
      printf("%4d", paths(w, h));
    }
    printf("\n");
  }
  return 0;
}
