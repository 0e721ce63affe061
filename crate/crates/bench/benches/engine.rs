use criterion::{black_box, criterion_group, criterion_main, Criterion};
use exacta_core::fgab::{AbCat, AbObject};
use exacta_core::fingrp::{catalog, Grp};
use exacta_core::homology::snake;
use exacta_core::matrix::{snf, Int, Mat};
use exacta_core::probe::{probe, AxiomId, ProbeBound};
use exacta_core::sample::{self, pools};
use exacta_core::setpt::SetPt;
use exacta_core::zexact::ZExact;
use rand::Rng as _;
use rand::SeedableRng as _;
use rand_chacha::ChaCha8Rng;

fn bench_snf(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mats: Vec<Mat> = (0..16)
        .map(|_| {
            let mut m = Mat::zero(5, 5);
            for i in 0..5 {
                for j in 0..5 {
                    m[(i, j)] = Int::from(rng.gen_range(-9i64..=9));
                }
            }
            m
        })
        .collect();
    c.bench_function("snf_5x5", |b| {
        b.iter(|| {
            for m in &mats {
                black_box(snf(black_box(m)));
            }
        })
    });
}

fn bench_snake(c: &mut Criterion) {
    let grp = Grp;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pool = pools::groups(16);
    let m = sample::sample_ses_morphism(&grp, &mut rng, &pool).unwrap();
    c.bench_function("snake_fingrp", |b| {
        b.iter(|| black_box(snake(&grp, black_box(&m))).unwrap())
    });

    let ab = AbCat;
    let mab = sample::sample_ses_morphism(&ab, &mut rng, &pools::ab(16)).unwrap();
    c.bench_function("snake_finab", |b| {
        b.iter(|| black_box(snake(&ab, black_box(&mab))).unwrap())
    });
}

fn bench_probe(c: &mut Criterion) {
    let sp = SetPt;
    c.bench_function("probe_setpt_ksg", |b| {
        b.iter(|| black_box(probe(&sp, AxiomId::Ksg, &ProbeBound::size(4))).unwrap())
    });
}

fn bench_kernel(c: &mut Criterion) {
    let ab = AbCat;
    let z12 = AbObject::from_factors(&[12, 4], 0);
    let f = ab
        .morphism(
            z12.clone(),
            z12.clone(),
            Mat::from_i64(&[&[2, 1], &[0, 2]]),
        )
        .unwrap();
    c.bench_function("kernel_finab", |b| b.iter(|| black_box(ab.kernel(black_box(&f)))));

    let s4 = catalog::symmetric(4);
    c.bench_function("normal_subgroups_s4", |b| {
        b.iter(|| black_box(s4.all_normal_subgroups()))
    });
}

criterion_group!(benches, bench_snf, bench_snake, bench_probe, bench_kernel);
criterion_main!(benches);
