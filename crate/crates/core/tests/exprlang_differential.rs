#[path = "common/exprgen.rs"]
mod exprgen;

#[test]
fn thousand_random_expressions_agree_with_reference() {
    let mismatches = exprgen::differential(0x5eed_0001, 1000);
    assert!(mismatches.is_empty(), "{} mismatches, first: {:?}", mismatches.len(), mismatches.first());
}

#[test]
fn generator_covers_errors_and_values() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let (mut ok, mut err) = (0, 0);
    for _ in 0..500 {
        match exprgen::random_node(&mut rng, 4).eval(0.7, -1.3) {
            Some(_) => ok += 1,
            None => err += 1,
        }
    }
    assert!(ok > 100 && err > 10, "ok {ok} err {err}");
}
