package textstat;

class Counter {
    int words;

    int tally(String line) {
        int n = line.length();
        words = words + n;
        return words;
    }
}
