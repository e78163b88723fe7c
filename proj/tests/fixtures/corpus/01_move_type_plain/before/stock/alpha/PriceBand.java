package stock.alpha;

public class PriceBand {
    private int floor;
    private int ceiling;

    public boolean contains(int price) {
        return price >= floor && price <= ceiling;
    }

    public int width() {
        return ceiling - floor;
    }
}
