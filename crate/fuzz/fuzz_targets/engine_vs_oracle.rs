#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| lars_core::fuzz::engine_vs_oracle(data));
