package inv;

class Rack {
}

class Shelf extends Rack {
    int count;

    int size() {
        return count * 2;
    }
}
