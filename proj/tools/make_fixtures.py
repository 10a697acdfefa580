#!/usr/bin/env python3
"""Regenerates the bundled fixture corpus under fixtures/.

Study-level facts (study type, primary belief, number of theoretical
structures, year, data quality, quantization methods, effects reported)
follow the six studies of the model-quantization synthesis. Per-effect
improvement samples are SYNTHETIC: they are drawn from a seeded RNG around
plausible centres and exist only to exercise the pipeline.

Statistics are computed here with numpy (R-7 quantiles, normal 95% CI) so
the C++ implementation is checked against an independent computation.
"""
import json
import math
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
THRESHOLDS = {"tIndifferent": 0.05, "tWeak": 0.20, "tModerate": 0.50}
POINTS = ["SN", "NE", "WN", "IF", "WP", "PO", "SP"]
GRADE_LOWER = {"unsystematic": 0.0, "observational": 0.25,
               "quasi-experiment": 0.50, "randomized-controlled-trial": 0.75}

WEIGHTS = [4, 4, 3, 3, 3, 2, 2, 2, 1, 1]
YES = {  # question indices answered "yes"; everything else "no"
    "S1": [0, 1, 2, 8],            # 12/25 = 0.48
    "S2": [0, 1, 2, 3],            # 14/25 = 0.56
    "S3": [0, 1, 2, 3],            # 14/25 = 0.56
    "S4": [0, 1, 2, 3, 4, 8],      # 18/25 = 0.72
    "S5": [0, 1, 2, 3, 4, 5, 6, 7, 8],  # 24/25 = 0.96
    "S6": [1, 2, 3, 4, 5, 6, 7, 8, 9],  # 21/25 = 0.84
}
QUESTIONS = [
    "Are the research questions or hypotheses clearly stated?",
    "Is the treatment (intervention) clearly defined?",
    "Is a control or baseline condition reported?",
    "Are the measurement instruments described?",
    "Are confounding factors controlled across runs?",
    "Are the measured variables appropriate to the research questions?",
    "Is the analysis procedure described in enough detail to repeat it?",
    "Are the results reported for every configuration studied?",
    "Are threats to validity discussed?",
    "Are raw data or replication materials available?",
]

STUDIES = {
    "S1": dict(type="observational", primary="37%", structures=5, year=2022,
               quality="Comparative", instruments="numerical estimation",
               domain="Respiratory anomaly detection system", timing="Quantization-aware training",
               citation="Energy-efficient respiratory anomaly detection in premature newborn infants (2022)"),
    "S2": dict(type="observational", primary="39%", structures=1, year=2022,
               quality="Comparative", instruments="numerical estimation",
               domain="Medical image analysis system", timing="Post-training quantization",
               citation="Verifiable and energy efficient medical image analysis with quantised self-attentive deep neural networks (2022)"),
    "S3": dict(type="quasi-experiment", primary="64%", structures=8, year=2022,
               quality="Comparative", instruments="hardware-based",
               domain="Bird call classification system", timing="Quantization-aware training",
               citation="Experimental energy consumption analysis of neural network model compression methods on microcontrollers (2022)"),
    "S4": dict(type="unsystematic", primary="18%", structures=2, year=2024,
               quality="Comparative (Bar chart)", instruments="numerical estimation",
               domain="Accelerator cost model", timing=None,
               citation="Energy cost modelling for optimizing large language model inference on hardware accelerators (2024)"),
    "S5": dict(type="quasi-experiment", primary="74%", structures=1, year=2025,
               quality="Precise", instruments="hardware-based, nvidia-smi",
               domain="Image classification system", timing="Post-training quantization",
               citation="Impact of ML optimization tactics on greener pre-trained ML models (2025)"),
    "S6": dict(type="quasi-experiment", primary="71%", structures=2, year=2025,
               quality="Precise", instruments="pyNVML, pyRAPL",
               domain="Code generation system", timing="Post-training quantization",
               citation="Language models in software development tasks: an experimental analysis of energy and accuracy (2025)"),
}

# (model id, study, method, component concept, samples, effect centres)
# Centres are (mean, spread) of the synthetic improvement draws; a bare string
# is a hypothesis for studies that only report summary charts.
ACC, F1, STO = "Accuracy", "F1 score", "Storage size"
GU, GMU, GPD, GEC = ("GPU utilization", "GPU memory utilization",
                     "GPU power draw", "GPU energy consumption")
LAT, IPD, IEC = ("Inference latency", "Inference power draw",
                 "Inference energy consumption")
W, A, F = ("Weights quantization", "Activations quantization",
           "Weights and activations quantization")

MODELS = [
    ("S1-Q0.2", "S1", "FP64->Q0.2 (F)", F, 1, {ACC: (-0.12, 0), STO: (0.9688, 0), IEC: (0.7412, 0)}),
    ("S1-Q0.4", "S1", "FP64->Q0.4 (F)", F, 1, {ACC: (-0.04, 0), STO: (0.9375, 0), IEC: (0.6633, 0)}),
    ("S1-Q0.8", "S1", "FP64->Q0.8 (F)", F, 1, {ACC: (-0.01, 0), STO: (0.875, 0), IEC: (0.5718, 0)}),
    ("S1-Q0.16", "S1", "FP64->Q0.16 (F)", F, 1, {ACC: (0.0, 0), STO: (0.75, 0), IEC: (0.4125, 0)}),
    ("S1-Q0.32", "S1", "FP64->Q0.32 (F)", F, 1, {ACC: (0.01, 0), STO: (0.5, 0), IEC: (0.2231, 0)}),
    ("S2-INT8", "S2", "FP32->INT8 (F)", F, 6, {ACC: (-0.015, 0.01), STO: (0.745, 0.004), IEC: None}),
    ("S3-Q0.8-W", "S3", "FP32->Q0.8 (W)", W, 1, {ACC: (-0.03, 0), F1: (-0.02, 0), STO: (0.70, 0), LAT: (0.06, 0), IPD: (0.09, 0), IEC: (0.14, 0)}),
    ("S3-Q0.8-A", "S3", "FP32->Q0.8 (A)", A, 1, {ACC: (-0.05, 0), F1: (-0.06, 0), STO: (0.05, 0), LAT: (0.11, 0), IPD: (0.12, 0), IEC: (0.18, 0)}),
    ("S3-Q0.8-F", "S3", "FP32->Q0.8 (F)", F, 1, {ACC: (-0.07, 0), F1: (-0.05, 0), STO: (0.74, 0), LAT: (0.17, 0), IPD: (0.21, 0), IEC: (0.31, 0)}),
    ("S3-Q0.16-W", "S3", "FP32->Q0.16 (W)", W, 1, {ACC: (0.01, 0), F1: (0.02, 0), STO: (0.47, 0), LAT: (0.03, 0), IPD: (0.04, 0), IEC: (0.07, 0)}),
    ("S3-Q0.16-A", "S3", "FP32->Q0.16 (A)", A, 1, {ACC: (0.0, 0), F1: (0.01, 0), STO: (0.03, 0), LAT: (0.05, 0), IPD: (0.06, 0), IEC: (0.10, 0)}),
    ("S3-Q0.16-F", "S3", "FP32->Q0.16 (F)", F, 1, {ACC: (-0.02, 0), F1: (-0.01, 0), STO: (0.50, 0), LAT: (0.09, 0), IPD: (0.13, 0), IEC: (0.19, 0)}),
    ("S3-Q0.8-W-Q0.16-A", "S3", "FP32->Q0.8 (W) + Q0.16 (A)", F, 1, {ACC: (-0.04, 0), F1: (-0.03, 0), STO: (0.72, 0), LAT: (0.12, 0), IPD: (0.16, 0), IEC: (0.24, 0)}),
    ("S3-Q0.16-W-Q0.8-A", "S3", "FP32->Q0.16 (W) + Q0.8 (A)", F, 1, {ACC: (-0.03, 0), F1: (-0.02, 0), STO: (0.49, 0), LAT: (0.10, 0), IPD: (0.14, 0), IEC: (0.22, 0)}),
    ("S4-INT1", "S4", "FP32->INT1 (W)", W, 1, {LAT: "SP", IEC: "SP"}),
    ("S4-INT4", "S4", "FP32->INT4 (W)", W, 1, {LAT: "PO", IEC: "{PO,SP}"}),
    ("S5-INT8", "S5", "FP32->INT8 (F)", F, 28, {ACC: (-0.02, 0.012), STO: (0.742, 0.006), GU: (0.01, 0.02), GPD: (0.12, 0.02), GEC: (0.41, 0.03), LAT: (0.55, 0.05), IPD: (0.35, 0.04), IEC: (0.78, 0.04)}),
    ("S6-INT4", "S6", "FP16->INT4 (W)", W, 18, {ACC: (-0.08, 0.03), "Model size": (0.70, 0.01), GU: (-0.02, 0.03), GMU: (0.55, 0.02), GPD: (0.08, 0.02), GEC: (0.45, 0.03), LAT: (0.15, 0.04)}),
    ("S6-INT8", "S6", "FP16->INT8 (W)", W, 18, {ACC: (-0.02, 0.01), "Model size": (0.47, 0.01), GU: (0.0, 0.02), GMU: (0.44, 0.02), GPD: (0.10, 0.02), GEC: (0.38, 0.03), LAT: (0.08, 0.03)}),
]

# S2 inference energy comes from raw before/after pairs (joules, lower is
# better), one per evaluated model; the same file ships as a measurement CSV.
S2_ENERGY_PAIRS = [(120.0, 41.0), (95.0, 36.0), (210.0, 70.5),
                   (88.0, 52.0), (143.0, 61.0), (176.0, 98.0)]

DOMAIN_CONTEXT = {"S6": "Large Language Model", "S5": "Convolutional neural network"}


def stats_of(improvements):
    x = np.asarray(improvements, dtype=float)
    n = len(x)
    mean = float(np.mean(x))
    q1, q3 = np.percentile(x, [25, 75])  # numpy default = R-7
    if n == 1:
        ci = (mean, mean)
    else:
        half = 1.96 * float(np.std(x, ddof=1)) / math.sqrt(n)
        ci = (mean - half, mean + half)
    return {"improvements": [float(v) for v in x], "mean": mean,
            "iqr": float(q3 - q1), "ci95": [ci[0], ci[1]], "sampleCount": n}


def band(v):
    m = abs(v)
    step = 3 if m >= THRESHOLDS["tModerate"] else 2 if m >= THRESHOLDS["tWeak"] \
        else 1 if m >= THRESHOLDS["tIndifferent"] else 0
    return 3 - step if v < 0 else 3 + step


def hypothesis(stats):
    lo, hi = band(stats["ci95"][0]), band(stats["ci95"][1])
    if abs(hi - lo) == 1:
        return "{%s,%s}" % (POINTS[min(lo, hi)], POINTS[max(lo, hi)])
    return POINTS[band(stats["mean"])]


def discount(stats):
    if stats["iqr"] == 0:
        return 0.0
    if stats["mean"] == 0:
        return 1.0
    return 1.0 - math.exp(-0.1 * abs(stats["iqr"] / stats["mean"]))


def base_belief(study):
    yes = sum(WEIGHTS[i] for i in YES[study])
    return GRADE_LOWER[STUDIES[study]["type"]] + 0.25 * (yes / sum(WEIGHTS))


def concept(name, kind, relations=()):
    return {"name": name, "kind": kind,
            "relations": [{"kind": k, "target": t} for k, t in relations]}


def build_model(model_id, study, method, component, samples, effects, rng):
    s = STUDIES[study]
    dl_model = DOMAIN_CONTEXT.get(study, "DL model")
    context = [
        concept("DL system", "archetype"),
        concept(dl_model, "contextual-aspect", [("part-of", "DL system")]),
        concept(s["domain"], "contextual-aspect", [("is-a", "DL system")]),
        concept(component, "contextual-aspect", [("property-of", "Model quantization")]),
    ]
    if s["timing"]:
        context.append(concept(s["timing"], "contextual-aspect",
                               [("property-of", "Model quantization")]))
    out_effects = []
    base = base_belief(study)
    for name, centre in effects.items():
        effect = {"name": name}
        if centre is None:  # S2 energy: raw pairs
            imps = [(b - t) / abs(b) for b, t in S2_ENERGY_PAIRS]
            st = stats_of(imps)
        elif isinstance(centre, str):
            effect.update(hypothesis=centre, belief=base, sampleCount=1)
            out_effects.append(effect)
            continue
        else:
            mean, spread = centre
            if samples == 1:
                imps = [mean]
            else:
                imps = [round(float(v), 4) for v in rng.normal(mean, spread, samples)]
            st = stats_of(imps)
        effect.update(hypothesis=hypothesis(st), belief=base * (1.0 - discount(st)),
                      sampleCount=st["sampleCount"], stats=st)
        out_effects.append(effect)
    return {
        "id": model_id,
        "studyId": study,
        "provenance": s["citation"],
        "cause": concept("Model quantization", "cause", [("property-of", dl_model)]),
        "context": context,
        "effects": out_effects,
        "metadata": {
            "studyType": s["type"],
            "primaryBelief": s["primary"],
            "theoreticalStructures": str(s["structures"]),
            "year": str(s["year"]),
            "dataQuality": s["quality"],
            "instruments": s["instruments"],
            "quantizationMethod": method,
            "synthetic": "effect statistics and intensities are synthetic fixture values",
        },
    }


def glossary():
    entries = [
        ("DL system", "Software system whose core behaviour is produced by a deep learning model.", []),
        ("DL model", "Trained deep neural network deployed for inference.",
         ["Large Language Model", "Convolutional neural network", "Neural network"]),
        ("Model quantization", "Reducing the numeric precision of model weights and/or activations.", ["Quantization"]),
        ("Quantization-aware training", "Quantization simulated during training.", ["QAT"]),
        ("Post-training quantization", "Quantization applied to an already trained model.", ["PTQ"]),
        (W, "Only the weights are stored at the target precision.", []),
        (A, "Only the activations are computed at the target precision.", []),
        (F, "Weights and activations both use the target precision.", []),
        ("Respiratory anomaly detection system", "Classifies respiratory sounds as normal or anomalous.", []),
        ("Medical image analysis system", "Classifies or segments medical images.", []),
        ("Bird call classification system", "Classifies bird species from audio.", []),
        ("Accelerator cost model", "Analytical energy and latency model of a hardware accelerator.", []),
        ("Image classification system", "Assigns a label to an input image.", []),
        ("Code generation system", "Generates source code from natural-language prompts.", []),
        (ACC, "Share of correct predictions.", ["Top-1 accuracy"]),
        (F1, "Harmonic mean of precision and recall.", ["F1"]),
        (STO, "Bytes needed to store the model.", ["Model size", "Storage footprint"]),
        (GU, "Share of time the GPU is busy.", []),
        (GMU, "Share of GPU memory in use.", []),
        (GPD, "Average GPU power during inference.", []),
        (GEC, "GPU energy consumed during inference.", ["Energy consumption (GPU)"]),
        (LAT, "Time to produce one inference.", ["Latency"]),
        (IPD, "Average system power during inference.", []),
        (IEC, "Energy consumed to produce inferences.", ["Energy consumption"]),
    ]
    return {"entries": [{"term": t, "definition": d, "synonyms": s} for t, d, s in entries]}


def questionnaire():
    qs = [{"id": f"q{i + 1}", "text": text, "weight": WEIGHTS[i]}
          for i, text in enumerate(QUESTIONS)]
    answers = {study: {f"q{i + 1}": ("yes" if i in yes else "no") for i in range(10)}
               for study, yes in YES.items()}
    return {"questions": qs, "answers": answers}


def write(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n")


def main():
    rng = np.random.default_rng(20250219)
    corpus = ROOT / "corpus"
    for old in corpus.glob("*.json"):
        old.unlink()
    for i, spec in enumerate(MODELS):
        write(corpus / f"{i + 1:02d}_{spec[0]}.json", build_model(*spec, rng))
    lines = ["# model: S2-INT8", f"# effect: {IEC}", "# polarity: lower-is-better",
             "# units: J per 1000 inferences", "baseline,treated"]
    lines += [f"{b},{t}" for b, t in S2_ENERGY_PAIRS]
    (corpus / "measurements").mkdir(exist_ok=True)
    (corpus / "measurements" / "s2_inference_energy.csv").write_text("\n".join(lines) + "\n")
    write(ROOT / "glossary.json", glossary())
    write(ROOT / "questionnaire.json", questionnaire())
    write(ROOT / "thresholds.json", THRESHOLDS)
    write(ROOT / "joins.json", {
        "joins": [{"canonicalName": "Healthcare DL system",
                   "members": ["Respiratory anomaly detection system",
                               "Medical image analysis system"]}],
        "drops": [],
        "keepUnmerged": ["Accelerator cost model"],
    })


if __name__ == "__main__":
    main()
