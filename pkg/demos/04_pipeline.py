"""Drive a full benchmark from a YAML config and read back the records."""
import tempfile
from pathlib import Path

from qgenbench.cli import cmd_report, cmd_run
from qgenbench.pipeline import apply_overrides, load_config, read_records, run_pipeline

root = Path(__file__).resolve().parent.parent
cfg = load_config(root / "configs" / "x_copula.yaml")
print(cfg.dump())

# Overrides use the same key syntax as `qgenbench run --set`.
cfg = apply_overrides(cfg, ["qcbm.max_evals=1000", "seed=11"])
rec = run_pipeline(cfg)
print("status:", rec.status)
for t in rec.timings:
    print(f"  {t.module_name:20s} pre {t.t_preprocess:8.4f}s  post {t.t_postprocess:8.4f}s")
print(f"tts {rec.tts:.4f}s, runner overhead {rec.t_overhead:.4f}s")
print("qcbm final KL:", rec.metrics["qcbm"]["final_kl"])
print("pit metrics:", {k: v for k, v in rec.metrics["pit"].items() if k.endswith("mean")})

# The CLI entry points are plain functions too.
with tempfile.TemporaryDirectory() as tmp:
    out = []
    for seed in (1, 2, 3):
        d = Path(tmp) / f"seed{seed}"
        cmd_run(root / "configs" / "discrete_standard.yaml", d, [f"seed={seed}", "qcbm.max_evals=500"])
        out.append(str(d / "results.json"))
    print(len(read_records(out[0])), "record in", out[0])
    cmd_report(out, "table")
