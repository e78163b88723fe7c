package storage;

class Shelf {
    int slots;
    int used;

    void audit() {
        slots++;
        slots = slots * 2;
    }
}

class Bin {
    int load;

    void take() {
        load--;
    }
}
