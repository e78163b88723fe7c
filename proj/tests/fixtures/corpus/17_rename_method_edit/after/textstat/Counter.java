package textstat;

class Counter {
    int words;

    int accumulate(String line) {
        int n = line.length();
        n = n + 1;
        words = words + n;
        return words;
    }
}
