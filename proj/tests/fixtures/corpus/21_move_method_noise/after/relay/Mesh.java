package relay;

class Hub {
    int ticks;
}

class Node {
    int ticks;

    int forward(int frame) {
        return frame ^ 255;
    }

    void sync() {
        ticks++;
    }

    void idle() {
    }
}
