package journal;

class Writer {
    int seq;

    void write(String entry) {
        seq = seq + 1;
        entry = seq + ":" + entry;
    }
}
