//! Built-in invariant suite, run by `irs-sim selftest`.

use crate::beamforming::{
    ais_max_rp, cascade_matrix, irses_antenna_gains, irses_max_rp_mrc, irses_partition, nsp_max_rp_mrc, nsp_projector,
    second_slot_optimize, theta_update_ais, theta_update_ais_pinv, Beamformer, Convergence, FirstSlotSolution,
    InterferenceMode, NspMode, ReceiveCombiner,
};
use crate::channel::{sample_channels, ChannelSet, Geometry, LinkBudget};
use crate::cli::{render_table, sweep_output_table, OutputFormat, RunSettings};
use crate::harness::{sweep, Method, ScenarioConfig, SweepAxis, SweepSpec};
use crate::linalg::phase_distance;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

const TRIALS: u64 = 25;

fn instance(m: usize, n: usize, seed: u64) -> ChannelSet {
    sample_channels(&Geometry::default(), &LinkBudget::default(), m, n, seed)
        .expect("default geometry is valid")
}

fn beams(sol: &FirstSlotSolution) -> Vec<&Beamformer> {
    match &sol.combiner {
        ReceiveCombiner::Single(u) => vec![u],
        ReceiveCombiner::Separated { source, irs } => vec![source, irs],
        ReceiveCombiner::PerAntenna(_) => Vec::new(),
    }
}

struct Worst {
    value: f64,
    bound: f64,
}

impl Worst {
    fn new(bound: f64) -> Self {
        Worst { value: 0.0, bound }
    }

    fn see(&mut self, v: f64) {
        if !(v <= self.value) {
            self.value = v;
        }
    }

    fn check(self, name: &'static str) -> Check {
        Check {
            name,
            passed: self.value <= self.bound,
            detail: format!("worst {:.3e} (bound {:.0e})", self.value, self.bound),
        }
    }
}

struct Solutions {
    firsts: Vec<FirstSlotSolution>,
    second: crate::beamforming::SecondSlotSolution,
}

fn solve_all(seed: u64) -> Solutions {
    let (p, noise) = (10.0, 0.02);
    let conv = Convergence::default();
    let ch = instance(4, 8, seed);
    let part = irses_partition(8, 4, seed).expect("4 | 8");
    let firsts = vec![
        ais_max_rp(&ch, p, noise, &conv).expect("ais"),
        nsp_max_rp_mrc(&ch, p, noise, &conv, NspMode::Effective).expect("nsp"),
        irses_max_rp_mrc(&ch, p, &[noise; 4], &part, InterferenceMode::Idealized).expect("irses"),
    ];
    let second = second_slot_optimize(&ch, p, noise, &conv).expect("second slot");
    Solutions {
        firsts,
        second,
    }
}

fn unit_modulus() -> Check {
    let mut worst = Worst::new(1e-15);
    for seed in 0..TRIALS {
        let s = solve_all(seed);
        let phases = s.firsts.iter().map(|f| &f.theta1).chain(std::iter::once(&s.second.theta2));
        for theta in phases {
            for c in theta.coefficients().iter() {
                worst.see((c.norm() - 1.0).abs());
            }
        }
    }
    worst.check("unit modulus")
}

fn unit_norm() -> Check {
    let mut worst = Worst::new(1e-12);
    for seed in 0..TRIALS {
        let s = solve_all(seed);
        for f in &s.firsts {
            for u in beams(f) {
                worst.see((u.weights().norm() - 1.0).abs());
            }
        }
        worst.see((s.second.u_t.weights().norm() - 1.0).abs());
    }
    worst.check("unit norm")
}

fn monotone_traces() -> Check {
    let mut worst = Worst::new(1e-12);
    for seed in 0..TRIALS {
        let s = solve_all(seed);
        let traces = s.firsts.iter().map(|f| &f.trace).chain(std::iter::once(&s.second.trace));
        for trace in traces {
            for w in trace.windows(2) {
                worst.see(w[0] - w[1]);
            }
        }
    }
    worst.check("monotone traces")
}

fn nsp_orthogonality() -> Check {
    let mut worst = Worst::new(1e-10);
    let conv = Convergence::default();
    for seed in 0..TRIALS {
        for (mode, m, n) in [(NspMode::Effective, 4, 8), (NspMode::Literal, 6, 3)] {
            let ch = instance(m, n, seed);
            let sol = nsp_max_rp_mrc(&ch, 10.0, 0.02, &conv, mode).expect("nsp");
            let ReceiveCombiner::Separated { source, irs } = &sol.combiner else {
                unreachable!()
            };
            worst.see(irs.response(&ch.h_sr).norm() / ch.h_sr.norm());
            match mode {
                NspMode::Effective => {
                    let g = cascade_matrix(&ch.h_ir, &ch.h_si) * sol.theta1.coefficients();
                    worst.see(source.response(&g).norm() / g.norm());
                }
                NspMode::Literal => {
                    worst.see(ch.h_ir.ad_mul(source.weights()).norm() / ch.h_ir.norm());
                }
            }
        }
    }
    worst.check("NSP orthogonality")
}

fn irses_alignment() -> Check {
    let mut worst = Worst::new(1e-12);
    for seed in 0..TRIALS {
        let ch = instance(4, 12, seed);
        let part = irses_partition(12, 4, seed).expect("4 | 12");
        let sol = irses_max_rp_mrc(&ch, 10.0, &[0.02; 4], &part, InterferenceMode::Idealized).expect("irses");
        let gains = irses_antenna_gains(&ch, &part, &sol.theta1, InterferenceMode::Idealized);
        for (m, g) in gains.iter().enumerate() {
            let sum: f64 = ch.h_sr[m].norm()
                + part
                    .subset(m)
                    .iter()
                    .map(|&i| ch.h_ir[(m, i)].norm() * ch.h_si[i].norm())
                    .sum::<f64>();
            worst.see((g.norm() - sum).abs() / sum);
        }
    }
    worst.check("IRSES amplitude alignment")
}

fn phase_update_forms_agree() -> Check {
    let mut worst = Worst::new(1e-9);
    for seed in 0..TRIALS {
        let ch = instance(3, 4, seed);
        let u = Beamformer::from_direction(&ch.h_sr + ch.h_ir.column(seed as usize % 4)).expect("nonzero");
        let a = theta_update_ais(&ch, &u).expect("closed form");
        let b = theta_update_ais_pinv(&ch, &u).expect("pseudo-inverse form");
        for (x, y) in a.angles().iter().zip(b.angles()) {
            worst.see(phase_distance(*x, *y));
        }
    }
    worst.check("phase update: pseudo-inverse vs alignment")
}

fn projector_identities() -> Check {
    let mut worst = Worst::new(1e-10);
    for seed in 0..TRIALS {
        let ch = instance(5, 2, seed);
        let a = &ch.h_ir;
        let p = nsp_projector(a);
        let scale = a.norm();
        worst.see((&p * a).norm() / scale);
        worst.see((&p * &p - &p).norm());
        worst.see((p.adjoint() - &p).norm());
    }
    worst.check("projector identities")
}

fn parallel_determinism() -> Check {
    let base = ScenarioConfig {
        antennas: 4,
        elements: 8,
        trials: 40,
        base_seed: 2024,
        ..ScenarioConfig::default()
    };
    let spec = SweepSpec {
        axis: SweepAxis::SnrDb,
        values: vec![0.0, 10.0, 20.0, 30.0],
        base: base.clone(),
        methods: Method::ALL.to_vec(),
    };
    let settings = RunSettings::from_sweep(&spec);
    let render = |threads: usize| -> Result<Vec<u8>, String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        let table = pool.install(|| sweep(&spec)).map_err(|e| e.to_string())?;
        let out = sweep_output_table("sweep-snr", &settings, &table);
        let mut bytes = Vec::new();
        render_table(&out, OutputFormat::Csv, &mut bytes).map_err(|e| e.to_string())?;
        Ok(bytes)
    };
    match (render(1), render(8)) {
        (Ok(a), Ok(b)) => Check {
            name: "determinism under 8-way parallelism",
            passed: a == b,
            detail: format!("{} bytes, identical: {}", a.len(), a == b),
        },
        (Err(e), _) | (_, Err(e)) => Check {
            name: "determinism under 8-way parallelism",
            passed: false,
            detail: e,
        },
    }
}

/// Runs every invariant check.
pub fn run_selftest() -> Vec<Check> {
    vec![
        unit_modulus(),
        unit_norm(),
        monotone_traces(),
        nsp_orthogonality(),
        irses_alignment(),
        phase_update_forms_agree(),
        projector_identities(),
        parallel_determinism(),
    ]
}
