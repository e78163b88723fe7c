package poolmgr;

class Pool {
    int size;
    int stock;

    void refill(int amount) {
        stock = stock + amount;
        stock = stock * 2;
    }

    void bump() {
        size++;
        size++;
        size++;
    }
}
