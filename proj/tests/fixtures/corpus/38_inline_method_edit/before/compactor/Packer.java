package compactor;

class Packer {
    int head;
    int tail;
    int gap;

    void pack() {
        fold();
        gap = gap + 2;
    }

    void fold() {
        head = head + 1;
        tail = tail - 1;
        head = head * 2;
    }
}
