//! The reduction from sponge inversion to pair search, driven end to end
//! with the amplitude-amplification inverter: by the equality of the two
//! challenge distributions, the reduction's success rate on pair-weighted
//! instances matches the inverter's standalone one-wayness success rate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zeropair::instances::{reduce_sponge_inversion, OracleInstance};
use zeropair::pairs;
use zeropair::permgroup::SubsetPair;
use zeropair::qsim::grover_sponge_inverter;
use zeropair::sponge::{one_wayness_game, SpongeParams};

#[test]
fn reduction_success_matches_standalone_game_rate() {
    let (rate, capacity) = (2u32, 2u32);
    let params = SpongeParams::new(rate, capacity).unwrap();
    let pair = SubsetPair::sponge(rate, capacity).unwrap();
    let iterations = 1u64;
    let trials = 1000u64;

    // Standalone: the inverter plays the one-wayness game directly.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut game_wins = 0u64;
    for trial in 0..trials {
        let mut inverter = grover_sponge_inverter(rate, capacity, iterations, 10_000 + trial);
        let transcript = one_wayness_game(&params, &mut inverter, &mut rng).unwrap();
        if transcript.success {
            game_wins += 1;
        }
    }
    let game_rate = game_wins as f64 / trials as f64;

    // Through the reduction: the same inverter is run against the
    // XOR-shifted view of a pair-weighted instance.
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let mut reduction_wins = 0u64;
    for trial in 0..trials {
        let pi = pairs::sample_dx(&pair, &mut rng).unwrap();
        let pi = OracleInstance::from_permutation(pi).unwrap();
        let mut inverter = grover_sponge_inverter(rate, capacity, iterations, 20_000 + trial);
        let (outcome, pi) =
            reduce_sponge_inversion(pi, rate, capacity, &mut inverter, &mut rng).unwrap();
        if let Some((input, z)) = outcome.pair {
            // every claimed success is a genuine X-pair
            let perm = pi.materialize().unwrap();
            assert!(pair
                .x_pairs(&perm)
                .unwrap()
                .contains(&(input as usize, z as usize)));
            reduction_wins += 1;
        }
        assert_eq!(outcome.total_queries, outcome.adversary_queries + 1);
    }
    let reduction_rate = reduction_wins as f64 / trials as f64;

    // Both rates estimate the same success probability; compare within
    // 3 sigma of the two-sample binomial error.
    let sigma = ((game_rate * (1.0 - game_rate) + reduction_rate * (1.0 - reduction_rate))
        / trials as f64)
        .sqrt();
    assert!(
        (game_rate - reduction_rate).abs() <= 3.0 * sigma.max(1e-3),
        "game {game_rate} vs reduction {reduction_rate} (sigma {sigma})"
    );
}
