package queuectl;

class Channel {
}

class Inbox extends Channel {
    int limit;

    int headroom() {
        return limit - 1;
    }
}
