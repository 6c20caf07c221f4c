int count_char(const char *text, char c) {
  int n = 0;
  int i = 0;
  while (text[i] != 0) {
    if (text[i] == c) {
      n++;
    }
    i++;
  }
  return n;
}

int main(void) {
  const char *msg = "line one\nsaid \"two\"\n";
  const char *other = "tab\there";
  return count_char(msg, '"') + count_char(msg, '\n') * 10 + count_char(other, 'e');
}
