//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::fs;
use std::panic;
use std::path::Path;
use std::time::{Duration, Instant};

use quatsculpt::blocks::{assemble_hypercube, follow_path, standard_block};
use quatsculpt::cli::{run, Command, RunConfig};
use quatsculpt::hypercube::hyperoctahedral_candidates;
use quatsculpt::mesh::{load_obj, write_obj, write_stl, Mesh};
use quatsculpt::pipeline::{generate_sculpture, to_sphere};
use quatsculpt::projection::{default_pole, radial_to_s3, stereo_project, stereo_unproject};
use quatsculpt::quat::Quaternion;
use quatsculpt::seed::demo_seed;
use quatsculpt::symmetry::{
    chirality_analysis, conjugates_onto, mirror, q8_left_group, q8_right_group,
    seed_asymmetry_check, symmetry_group, ChiralityClass, PointCloud4, DEFAULT_TOLERANCE,
};
use quatsculpt::vector::{distance, dot, norm, scale, sub, Vec3, Vec4};
use quatsculpt::{Isometry4, Orientation, Q8Element};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_vec4(r: &mut ChaCha8Rng) -> Vec4 {
    loop {
        let v: Vec4 = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let n = norm(&v);
        if n > 0.1 && n <= 1.0 {
            return scale(&v, 1.0 / n);
        }
    }
}

fn max_abs(m: &[[f64; 4]; 4]) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()))
}

fn plus_identity(iso: &Isometry4) -> [[f64; 4]; 4] {
    let mut m = *iso.matrix();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] += 1.0;
    }
    m
}

fn q8_table() -> Result<String, String> {
    let text = fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/q8_table.txt"),
    )
    .map_err(|e| e.to_string())?;
    let mut lines = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or("empty table")?
        .split_whitespace()
        .collect();
    let mut checked = 0;
    for line in lines {
        let cells: Vec<&str> = line.split_whitespace().collect();
        let row: Q8Element = cells[0].parse().map_err(|e| format!("{e}"))?;
        for (col, expected) in header.iter().zip(&cells[1..]) {
            let col: Q8Element = col.parse().map_err(|e| format!("{e}"))?;
            let got = (row * col).to_string();
            ensure(
                got == *expected,
                format!("{row} * {col} = {got}, table says {expected}"),
            )?;
            checked += 1;
        }
    }
    ensure(checked == 64, format!("table has {checked} entries"))?;
    Ok("64/64 products match the transcribed table".into())
}

fn order_census() -> Result<String, String> {
    let mut counts = [0usize; 5];
    for g in Q8Element::ALL {
        counts[g.order() as usize] += 1;
    }
    ensure(
        counts[1] == 1 && counts[2] == 1 && counts[4] == 6,
        format!("{counts:?}"),
    )?;
    Ok("orders: 1 x1, 1 x2, 6 x4".into())
}

fn defining_relations() -> Result<String, String> {
    let (i, j, k) = (
        Q8Element::I.right_mul_matrix(),
        Q8Element::J.right_mul_matrix(),
        Q8Element::K.right_mul_matrix(),
    );
    let errs = [
        max_abs(&plus_identity(&i.then(&i))),
        max_abs(&plus_identity(&j.then(&j))),
        max_abs(&plus_identity(&k.then(&k))),
        max_abs(&plus_identity(&i.then(&j).then(&k))),
    ];
    let worst = errs.iter().fold(0.0f64, |a, &b| a.max(b));
    ensure(worst <= 1e-12, format!("max error {worst:e}"))?;
    Ok(format!("i^2, j^2, k^2, ijk = -1; max error {worst:e}"))
}

fn worked_example() -> Result<String, String> {
    let mut r = rng(4);
    let m = Q8Element::I.right_mul_matrix();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (x, y, z) = (
            r.gen_range(-1.0..1.0),
            r.gen_range(-1.0..1.0),
            r.gen_range(-1.0..1.0),
        );
        let expected = [-x, 1.0, z, -y];
        let by_product = (Quaternion::new(1.0, x, y, z) * Quaternion::I).to_vec4();
        let by_matrix = m.apply(&[1.0, x, y, z]);
        worst = worst
            .max(distance(&by_product, &expected))
            .max(distance(&by_matrix, &expected));
    }
    ensure(worst <= 1e-12, format!("max error {worst:e}"))?;
    Ok(format!(
        "(1,x,y,z)*i = (-x,1,z,-y) over 100 samples; max error {worst:e}"
    ))
}

fn isoclinic() -> Result<String, String> {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for g in Q8Element::ALL.iter().filter(|g| g.order() == 4) {
        let m = g.right_mul_matrix();
        for _ in 0..1000 {
            let v = unit_vec4(&mut r);
            worst = worst.max(dot(&v, &m.apply(&v)).abs());
        }
    }
    ensure(worst <= 1e-9, format!("max |<v, vq>| = {worst:e}"))?;
    Ok(format!("6 x 1000 samples, max |<v, vq>| = {worst:e}"))
}

fn cayley_paths() -> Result<String, String> {
    use Q8Element as Q;
    let words: [&[Q8Element]; 4] = [
        &[Q::I, Q::I],
        &[Q::J, Q::J],
        &[Q::K, Q::K],
        &[Q::I, Q::J, Q::K],
    ];
    let mut exact = 0;
    for start in Q::ALL {
        for w in words {
            let end = follow_path(start, w);
            ensure(
                end == Some(-start),
                format!("{start} along {w:?} ends at {end:?}"),
            )?;
            exact += 1;
        }
    }
    Ok(format!("{exact}/32 paths land on start * -1"))
}

fn block_assembly() -> Result<String, String> {
    let block = standard_block();
    let a = assemble_hypercube(&block);
    let nontrivial = block
        .symmetries()
        .iter()
        .filter(|s| !s.is_identity())
        .count();
    ensure(
        a.matched == 24 && a.faces.len() == 24,
        format!("{}/{} faces matched", a.matched, a.faces.len()),
    )?;
    ensure(
        nontrivial == 0,
        format!("block has {nontrivial} nontrivial symmetries"),
    )?;
    Ok("24/24 face matches; block has 0 nontrivial cube symmetries".into())
}

fn push_forward(q: &Vec4, t: &Vec4, h: f64) -> Vec3 {
    let pole = default_pole();
    let at = |s: f64| {
        let p: Vec4 = std::array::from_fn(|i| q[i] + s * t[i]);
        let p = scale(&p, 1.0 / norm(&p));
        stereo_project(&p, &pole).unwrap()
    };
    scale(&sub(&at(h), &at(-h)), 0.5 / h)
}

fn projection() -> Result<String, String> {
    let mut r = rng(8);
    let mut radial = 0.0f64;
    for _ in 0..100_000 {
        let p: Vec3 = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        radial = radial.max((norm(&radial_to_s3(&p)) - 1.0).abs());
    }
    ensure(radial <= 1e-12, format!("radial norm error {radial:e}"))?;

    let pole = default_pole();
    let mut round = 0.0f64;
    let mut tested = 0;
    while tested < 10_000 {
        let q = unit_vec4(&mut r);
        if distance(&q, &pole.point()) <= 1e-3 {
            continue;
        }
        let back = stereo_unproject(
            &stereo_project(&q, &pole).map_err(|e| e.to_string())?,
            &pole,
        );
        round = round.max(distance(&back, &q));
        tested += 1;
    }
    ensure(round <= 1e-9, format!("round trip error {round:e}"))?;

    let mut angle_err = 0.0f64;
    let mut spots = 0;
    while spots < 100 {
        let q = unit_vec4(&mut r);
        if distance(&q, &pole.point()) < 0.2 {
            continue;
        }
        let (a, b) = (unit_vec4(&mut r), unit_vec4(&mut r));
        let ta = sub(&a, &scale(&q, dot(&a, &q)));
        let tb = sub(&b, &scale(&q, dot(&b, &q)));
        if norm(&ta) < 0.1 || norm(&tb) < 0.1 {
            continue;
        }
        let on_sphere = (dot(&ta, &tb) / (norm(&ta) * norm(&tb)))
            .clamp(-1.0, 1.0)
            .acos();
        let (da, db) = (push_forward(&q, &ta, 1e-6), push_forward(&q, &tb, 1e-6));
        let in_space = (dot(&da, &db) / (norm(&da) * norm(&db)))
            .clamp(-1.0, 1.0)
            .acos();
        angle_err = angle_err.max((on_sphere - in_space).abs().to_degrees());
        spots += 1;
    }
    ensure(angle_err <= 0.01, format!("angle error {angle_err} deg"))?;
    Ok(format!(
        "radial {radial:e} (1e5 pts), round trip {round:e} (1e4 pts), max angle error {angle_err:.2e} deg"
    ))
}

/// 40 random interior points passing the asymmetry check.
fn random_seed() -> Vec<Vec3> {
    let mut r = rng(9);
    loop {
        let seed: Vec<Vec3> = (0..40)
            .map(|_| std::array::from_fn(|_| r.gen_range(-0.9..0.9)))
            .collect();
        if seed_asymmetry_check(&seed, DEFAULT_TOLERANCE).unwrap_or(false) {
            return seed;
        }
    }
}

/// Seed copies placed on S^3, sent through the projection and back.
fn generated_cloud(seed: &[Vec3]) -> Result<PointCloud4, String> {
    let pole = default_pole();
    let mut points = Vec::new();
    for g in Q8Element::ALL {
        for p in seed {
            let v = stereo_project(&to_sphere(p, g), &pole).map_err(|e| e.to_string())?;
            points.push(stereo_unproject(&v, &pole));
        }
    }
    PointCloud4::new(points).map_err(|e| e.to_string())
}

fn end_to_end() -> Result<String, String> {
    let seed = random_seed();
    let start = Instant::now();
    let cloud = generated_cloud(&seed)?;
    let report = symmetry_group(&cloud, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        cloud.len() == 320,
        format!("cloud has {} points", cloud.len()),
    )?;
    ensure(
        report.candidates_tested == 384,
        "candidate universe is not 384",
    )?;
    ensure(
        report.is_exactly_q8 && report.symmetries.len() == 8,
        format!("{} symmetries survive", report.symmetries.len()),
    )?;
    ensure(
        elapsed <= Duration::from_secs(5),
        format!("took {elapsed:?}"),
    )?;

    let control = generated_cloud(&[[0.0; 3]])?;
    let c = symmetry_group(&control, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    ensure(
        c.symmetries.len() == 384,
        format!("origin seed keeps {} symmetries", c.symmetries.len()),
    )?;
    Ok(format!(
        "320 points, exactly the 8 Q8 matrices of 384 in {:.0} ms; origin seed keeps 384/384",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn metachirality() -> Result<String, String> {
    let cloud = generated_cloud(&random_seed())?;
    let a = chirality_analysis(&cloud, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    let preserving = hyperoctahedral_candidates()
        .iter()
        .filter(|c| c.orientation() == Orientation::Preserving)
        .count();
    ensure(
        preserving == 192,
        format!("{preserving} orientation-preserving candidates"),
    )?;
    ensure(
        a.mirror_match.is_none(),
        "an orientation-preserving candidate matches the mirror image",
    )?;
    ensure(
        a.conjugators.is_empty(),
        format!("{} conjugators found", a.conjugators.len()),
    )?;
    ensure(
        a.class == ChiralityClass::Metachiral,
        format!("classified {:?}", a.class),
    )?;
    let group = q8_right_group();
    ensure(
        conjugates_onto(&mirror(), &group, &q8_left_group()),
        "mirror does not conjugate onto the left copy of Q8",
    )?;
    ensure(
        conjugates_onto(&mirror(), &group, &a.mirror_group),
        "mirror image's group is not the conjugate",
    )?;
    Ok("metachiral: 0/192 mirror matches, 0/192 conjugators; m G m^-1 = left Q8".into())
}

fn file_formats() -> Result<String, String> {
    let mut r = rng(11);
    let mut worst = 0.0f64;
    let mut meshes: Vec<Mesh> = (0..50)
        .map(|_| {
            let n = r.gen_range(3..30);
            let vertices: Vec<Vec3> = (0..n)
                .map(|_| std::array::from_fn(|_| r.gen_range(-10.0..10.0)))
                .collect();
            let triangles = (0..n - 2).map(|i| [i, i + 1, i + 2]).collect();
            Mesh {
                vertices,
                triangles,
            }
        })
        .collect();
    meshes.push(
        generate_sculpture(&demo_seed(), &default_pole(), 1.0)
            .map_err(|e| e.to_string())?
            .merged,
    );
    for m in &meshes {
        let stl = write_stl(m).map_err(|e| e.to_string())?;
        ensure(
            stl.len() == 84 + 50 * m.triangles.len(),
            "STL length mismatch",
        )?;
        let obj = write_obj(m, &[]).map_err(|e| e.to_string())?;
        let back = load_obj(obj.as_bytes()).map_err(|e| e.to_string())?;
        ensure(back.triangles == m.triangles, "OBJ triangles changed")?;
        for (a, b) in back.vertices.iter().zip(&m.vertices) {
            worst = worst.max(distance(a, b));
        }
    }
    ensure(worst <= 1e-7, format!("OBJ round trip error {worst:e}"))?;

    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let mut config = RunConfig::new(Command::Generate);
        config.out_path = Some(d.path().to_path_buf());
        let code = run(&config, &mut Vec::new(), &mut Vec::new());
        ensure(code == 0, format!("generate exited {code}"))?;
    }
    let mut names: Vec<_> = fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for n in &names {
        let (a, b) = (
            fs::read(dirs[0].path().join(n)),
            fs::read(dirs[1].path().join(n)),
        );
        ensure(a.ok() == b.ok(), format!("{n:?} differs between runs"))?;
    }
    Ok(format!(
        "STL sizes exact, OBJ round trip {worst:e} over {} meshes, {} files byte-identical across runs",
        meshes.len(),
        names.len()
    ))
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("Q8 multiplication table", q8_table),
        ("order census", order_census),
        ("defining relations as matrices", defining_relations),
        ("worked right multiplication by i", worked_example),
        ("isoclinic right multiplication", isoclinic),
        ("Cayley graph paths", cayley_paths),
        ("block assembly", block_assembly),
        ("projection accuracy", projection),
        ("end-to-end exact Q8 symmetry", end_to_end),
        ("metachirality", metachirality),
        ("file formats and determinism", file_formats),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", n + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
