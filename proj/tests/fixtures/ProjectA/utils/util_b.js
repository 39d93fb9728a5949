class Car {
    constructor(name, age) {
        this.name = name;
        this.age = age;
    }
    drive(distance, direction) {
        return `${this.name} drives ${distance} km ${direction}`;
    }
}
var item_list = {
    apple: 1,
    banana: 2
}
function buy(item) {
    return item_list[item];
}

module.exports = { Car, item_list, buy };
