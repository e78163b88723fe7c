package metrics;

class Meter {
    long total;

    long aggregate(long[] xs) {
        long acc = 0;
        for (int i = 0; i < xs.length; i++) {
            acc += xs[i];
        }
        return acc;
    }

    void record(long v) {
        total += v;
    }
}
