package taxa;

class Animal {
    String describe(String name) {
        return name + " says woof";
    }
}

class Dog extends Animal {
}
