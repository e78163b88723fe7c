package books;

class Catalog {
    String owner;

    boolean isOwned(String name) {
        return owner != null && owner.equals(name);
    }

    void assign(String name) {
        owner = name;
    }
}
