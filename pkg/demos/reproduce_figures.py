"""
Figure data from the bundled presets
====================================

Every figure panel has a named preset; the same runs are available from the
shell, e.g. ``nrblockade sweep --preset fig2a --out fig2a.csv``. Here a
reduced grid keeps the demo quick.
"""

from nrblockade.sweep import list_presets, load_preset, predict_resonances, run_sweep

print("presets:", ", ".join(list_presets()))

cfg = load_preset("fig2a", ["sweep.points = 49"])
res = run_sweep(cfg)
print(res.to_csv().splitlines()[:10])

report = predict_resonances(cfg, sweep=res)
print(report.format_table())
