package shipping;

class Crate {
    int weightOf(int items) {
        return items * 12 + 3;
    }

    void seal() {
    }
}

class Pallet {
    void brand() {
    }
}
