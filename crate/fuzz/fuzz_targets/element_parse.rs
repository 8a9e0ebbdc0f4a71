#![no_main]

use cyclic_green::{GreenElement, Order};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let order = Order::new(2, 3).unwrap();
    if let Ok(a) = GreenElement::parse(order, text) {
        let back = GreenElement::parse(order, &a.to_string()).expect("display output parses");
        assert_eq!(a, back);
    }
});
