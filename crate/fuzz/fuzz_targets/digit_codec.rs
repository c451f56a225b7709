#![no_main]

use cornerforge::digits::{from_digits, from_digits_big, to_digits, DigitVector};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() < 11 {
        return;
    }
    let q = u16::from_le_bytes([data[0], data[1]]) as u32;
    let d = data[2] as u32 % 72;
    let x = u64::from_le_bytes(data[3..11].try_into().unwrap());

    if let Ok(v) = to_digits(x, q, d) {
        assert_eq!(v.len(), d as usize);
        assert_eq!(from_digits(&v).unwrap(), x);
    }

    // Decoding arbitrary digit strings must reject or evaluate, never panic.
    let digits: Vec<u32> = data[11..].iter().map(|&b| b as u32).collect();
    if let Ok(v) = DigitVector::new(q, digits) {
        let value = from_digits_big(&v);
        if let Ok(small) = from_digits(&v) {
            assert_eq!(value, small.into());
        }
    }
});
