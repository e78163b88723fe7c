package billing;

class Invoice {
    int subtotal;

    int taxedTotal(int rate) {
        return subtotal + subtotal * rate / 100;
    }

    void clear() {
        subtotal = 0;
    }
}
