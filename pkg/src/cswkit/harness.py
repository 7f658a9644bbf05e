"""Full-evaluation orchestration: score every (language, setting, model)
cell, compute both baselines and their deltas, and render report tables.

The harness never runs model inference; hypothesis files are produced
externally (one detokenized sentence per line, order-aligned with the
reference file) and referenced from a flat key=value config:

    tokenization = whitespace
    languages = ca,cy
    ref.ca.en = refs/ca.en.txt          # English references
    ref.ca.xx = refs/ca.xx.txt          # non-English references
    csw.ca = data/ca.csw.tsv            # synthesized dataset (raw inputs)
    hyp.ca.csw_to_en.nllb = out/ca.csw_to_en.nllb.txt
    hyp.ca.x_to_en.nllb = out/ca.x_to_en.nllb.txt
    ...
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import mt_eval
from .corpus_io import LANGUAGES, CodeSwitchedSentence, parse_dataset
from .mt_eval import (
    BaselineKind,
    DeltaEntry,
    ScoredSystem,
    Setting,
    bleu,
    chrf_pp,
    copy_rate,
    monolingual_tagged,
    replacement_rate,
    score_deltas,
    tokenize_for_bleu,
)

RAW_INPUT_MODEL = "raw_csw"


@dataclass
class EvalConfig:
    languages: list[str]
    models: list[str]
    settings: list[Setting]
    tokenization: str
    hyp_paths: dict[tuple[str, Setting, str], Path]
    ref_paths: dict[tuple[str, str], Path]  # (lang, "en"|"xx") -> path
    csw_paths: dict[str, Path]
    base_dir: Path = field(default_factory=Path)

    @classmethod
    def from_file(cls, path: str | Path) -> "EvalConfig":
        path = Path(path)
        pairs: list[tuple[str, str]] = []
        for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            pairs.append((key, value))
        return cls.from_pairs(pairs, base_dir=path.parent)

    @classmethod
    def from_pairs(
        cls, pairs: Sequence[tuple[str, str]], base_dir: str | Path = "."
    ) -> "EvalConfig":
        base = Path(base_dir)
        tokenization = "whitespace"
        languages: list[str] = []
        hyp_paths: dict[tuple[str, Setting, str], Path] = {}
        ref_paths: dict[tuple[str, str], Path] = {}
        csw_paths: dict[str, Path] = {}
        for key, value in pairs:
            parts = key.split(".")
            if key == "tokenization":
                tokenization = value
            elif key == "languages":
                languages = [x.strip() for x in value.split(",") if x.strip()]
            elif parts[0] == "ref" and len(parts) == 3 and parts[2] in ("en", "xx"):
                ref_paths[(parts[1], parts[2])] = base / value
            elif parts[0] == "csw" and len(parts) == 2:
                csw_paths[parts[1]] = base / value
            elif parts[0] == "hyp" and len(parts) == 4:
                lang, setting_name, model = parts[1], parts[2], parts[3]
                setting = Setting(setting_name)
                hyp_paths[(lang, setting, model)] = base / value
            else:
                raise ValueError(f"unknown config key {key!r}")
        if not languages:
            languages = sorted({lang for lang, _, _ in hyp_paths})
        models = sorted({m for _, _, m in hyp_paths})
        settings = sorted({s for _, s, _ in hyp_paths}, key=lambda s: s.value)
        config = cls(
            languages=languages, models=models, settings=settings,
            tokenization=tokenization, hyp_paths=hyp_paths,
            ref_paths=ref_paths, csw_paths=csw_paths, base_dir=base,
        )
        config.validate()
        return config

    def validate(self) -> None:
        unknown = [x for x in self.languages if x not in LANGUAGES]
        if unknown:
            raise ValueError(f"unknown language codes: {', '.join(unknown)}")
        for (lang, setting, model), p in sorted(self.hyp_paths.items()):
            if not p.is_file():
                raise FileNotFoundError(
                    f"hypothesis file for ({lang}, {setting.value}, {model}) "
                    f"missing: {p}"
                )
        for key, p in sorted(self.ref_paths.items()):
            if not p.is_file():
                raise FileNotFoundError(f"reference file for {key} missing: {p}")
        for lang, p in sorted(self.csw_paths.items()):
            if not p.is_file():
                raise FileNotFoundError(f"csw dataset for {lang} missing: {p}")


@dataclass
class ScoreReport:
    systems: list[ScoredSystem]
    deltas: list[DeltaEntry]

    def system(
        self, lang: str, setting: Setting, model: str
    ) -> ScoredSystem | None:
        for s in self.systems:
            if (s.lang, s.setting, s.model) == (lang, setting, model):
                return s
        return None


def _read_lines(path: Path) -> list[str]:
    return path.read_text(encoding="utf-8").splitlines()


def run_evaluation(config: EvalConfig) -> ScoreReport:
    """Score every configured cell plus the raw-input baselines, then
    attach deltas against both baseline kinds."""
    config.validate()
    systems: list[ScoredSystem] = []
    deltas: list[DeltaEntry] = []
    refs_cache: dict[tuple[str, str], list[str]] = {}
    csw_cache: dict[str, list[CodeSwitchedSentence]] = {}

    def ref_lines(lang: str, side: str) -> list[str]:
        key = (lang, side)
        if key not in refs_cache:
            refs_cache[key] = _read_lines(config.ref_paths[key])
        return refs_cache[key]

    def csw_records(lang: str) -> list[CodeSwitchedSentence]:
        if lang not in csw_cache:
            csw_cache[lang] = parse_dataset(
                config.csw_paths[lang].read_text(encoding="utf-8")
            )
        return csw_cache[lang]

    def string_scores(hyps: list[str], refs: list[str], cell: str):
        if len(hyps) != len(refs):
            raise ValueError(
                f"{cell}: {len(hyps)} hypothesis lines vs {len(refs)} references"
            )
        tok = lambda lines: [tokenize_for_bleu(x, config.tokenization) for x in lines]
        return bleu(tok(hyps), tok(refs)), chrf_pp(hyps, refs)

    for lang in config.languages:
        # raw-input baseline: the code-switched text scored as-is
        if lang in config.csw_paths:
            records = csw_records(lang)
            raw_text = [rec.text for rec in records]
            for setting in (Setting.CSW_TO_EN, Setting.CSW_TO_X):
                side = "en" if setting.target_is_english else "xx"
                if (lang, side) not in config.ref_paths:
                    continue
                b, c = string_scores(
                    raw_text, ref_lines(lang, side),
                    f"({lang}, {setting.value}, {RAW_INPUT_MODEL})",
                )
                systems.append(ScoredSystem(
                    setting=setting, lang=lang, model=RAW_INPUT_MODEL,
                    bleu=b, chrfpp=c,
                ))

        for setting in config.settings:
            for model in config.models:
                key = (lang, setting, model)
                if key not in config.hyp_paths:
                    continue
                cell = f"({lang}, {setting.value}, {model})"
                hyps = _read_lines(config.hyp_paths[key])
                side = "en" if setting.target_is_english else "xx"
                refs = ref_lines(lang, side)
                b, c = string_scores(hyps, refs, cell)
                cr = rr = None
                target = "l1" if setting.target_is_english else "l2"
                if setting.is_csw and lang in config.csw_paths:
                    records = csw_records(lang)
                    if len(records) != len(hyps):
                        raise ValueError(
                            f"{cell}: {len(hyps)} hypothesis lines vs "
                            f"{len(records)} dataset records"
                        )
                    cr = copy_rate(records, hyps, target=target)
                    rr = replacement_rate(records, hyps, target=target)
                elif not setting.is_csw:
                    # monolingual replacement rate: the whole source is
                    # non-target text
                    src_side = "xx" if setting is Setting.X_TO_EN else "en"
                    if (lang, src_side) in config.ref_paths:
                        src_tag = (
                            mt_eval.TAG_L2 if src_side == "xx" else mt_eval.TAG_L1
                        )
                        tagged = [
                            monolingual_tagged(line, src_tag)
                            for line in ref_lines(lang, src_side)
                        ]
                        rr = replacement_rate(tagged, hyps, target=target)
                systems.append(ScoredSystem(
                    setting=setting, lang=lang, model=model,
                    bleu=b, chrfpp=c, copy_rate=cr, replacement_rate=rr,
                ))

    report = ScoreReport(systems=systems, deltas=deltas)
    _attach_deltas(report)
    return report


_MONOLINGUAL_OF = {
    Setting.CSW_TO_EN: Setting.X_TO_EN,
    Setting.CSW_TO_X: Setting.EN_TO_X,
}


def _attach_deltas(report: ScoreReport) -> None:
    for sys in report.systems:
        if not sys.setting.is_csw or sys.model == RAW_INPUT_MODEL:
            continue
        mono = report.system(sys.lang, _MONOLINGUAL_OF[sys.setting], sys.model)
        if mono is not None:
            report.deltas.extend(
                score_deltas(
                    _common_metrics(sys, mono), _common_metrics(mono, sys),
                    BaselineKind.MONOLINGUAL,
                )
            )
        raw = report.system(sys.lang, sys.setting, RAW_INPUT_MODEL)
        if raw is not None:
            report.deltas.extend(
                score_deltas(
                    _common_metrics(sys, raw), _common_metrics(raw, sys),
                    BaselineKind.RAW_CSW_INPUT,
                )
            )


def _common_metrics(a: ScoredSystem, b: ScoredSystem) -> ScoredSystem:
    """Restrict ``a`` to the optional metrics both sides carry."""
    kwargs = {}
    for name in ("copy_rate", "replacement_rate", "comet"):
        if a.metric(name) is None or b.metric(name) is None:
            kwargs[name] = None
        else:
            kwargs[name] = a.metric(name)
    return ScoredSystem(
        setting=a.setting, lang=a.lang, model=a.model,
        bleu=a.bleu, chrfpp=a.chrfpp, **kwargs,
    )


BEST_MARK = "*"
WORST_MARK = "!"


def render_report(report: ScoreReport, format: str = "tsv") -> str:
    """Render score and delta tables, one table per (metric, table kind).

    Rows are languages in alphabetical ISO order; in each column the best
    value is marked (``*`` in TSV, bold in markdown) and the worst marked
    (``!`` in TSV, italics in markdown); ties mark every tied cell. Values
    are rounded to 1 decimal; deltas carry an explicit sign. Missing cells
    render as an em-dash placeholder ``--``.
    """
    if format not in ("tsv", "markdown"):
        raise ValueError(f"unknown report format {format!r}")
    if not report.systems:
        raise ValueError("empty report")
    langs = sorted({s.lang for s in report.systems})
    chunks: list[str] = []

    for metric in ("bleu", "chrfpp", "copy_rate", "replacement_rate"):
        columns: list[tuple[str, Setting, str]] = []
        for setting in Setting:
            for model in sorted({s.model for s in report.systems}):
                cells = [
                    s for s in report.systems
                    if s.setting == setting and s.model == model
                    and s.metric(metric) is not None
                ]
                if cells:
                    columns.append((f"{setting.value}/{model}", setting, model))
        if not columns:
            continue
        grid = {}
        for title, setting, model in columns:
            for lang in langs:
                s = report.system(lang, setting, model)
                value = s.metric(metric) if s else None
                grid[(lang, title)] = value
        chunks.append(_render_table(
            f"scores: {metric}", langs, [c[0] for c in columns], grid,
            format, signed=False,
        ))

    for kind in BaselineKind:
        for metric in ("bleu", "chrfpp", "replacement_rate"):
            entries = [
                d for d in report.deltas
                if d.baseline == kind and d.metric == metric
            ]
            if not entries:
                continue
            titles = sorted({f"{d.setting.value}/{d.model}" for d in entries})
            grid = {}
            for d in entries:
                grid[(d.lang, f"{d.setting.value}/{d.model}")] = d.delta
            chunks.append(_render_table(
                f"deltas vs {kind.value}: {metric}", langs, titles, grid,
                format, signed=True,
            ))
    return "\n".join(chunks)


def _render_table(title, langs, columns, grid, format, signed):
    def fmt(v):
        if v is None:
            return "--"
        return f"{v:+.1f}" if signed else f"{v:.1f}"

    best: dict[str, float] = {}
    worst: dict[str, float] = {}
    for col in columns:
        values = [grid.get((lang, col)) for lang in langs]
        present = [v for v in values if v is not None]
        if present:
            best[col] = max(present)
            worst[col] = min(present)

    def cell(lang, col):
        v = grid.get((lang, col))
        text = fmt(v)
        if v is None:
            return text
        is_best = col in best and v == best[col]
        is_worst = col in worst and v == worst[col]
        if format == "markdown":
            if is_best:
                text = f"**{text}**"
            if is_worst:
                text = f"_{text}_"
        else:
            if is_best:
                text += BEST_MARK
            if is_worst:
                text += WORST_MARK
        return text

    if format == "markdown":
        lines = [f"### {title}", ""]
        lines.append("| lang | " + " | ".join(columns) + " |")
        lines.append("|" + "---|" * (len(columns) + 1))
        for lang in langs:
            lines.append(
                f"| {lang} | " + " | ".join(cell(lang, c) for c in columns) + " |"
            )
        lines.append("")
    else:
        lines = [f"# {title}"]
        lines.append("\t".join(["lang"] + columns))
        for lang in langs:
            lines.append("\t".join([lang] + [cell(lang, c) for c in columns]))
        lines.append("")
    return "\n".join(lines)


def parse_report_tsv(text: str) -> dict[tuple[str, str, str], float]:
    """Read back numeric values from a TSV report; inverse of the renderer
    up to the 1-decimal rounding. Keys are (table title, lang, column)."""
    values: dict[tuple[str, str, str], float] = {}
    title = ""
    columns: list[str] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("# "):
            title = line[2:]
            columns = []
        elif not columns:
            columns = line.split("\t")[1:]
        else:
            fields = line.split("\t")
            lang = fields[0]
            for col, raw in zip(columns, fields[1:]):
                raw = raw.rstrip(BEST_MARK + WORST_MARK)
                if raw != "--":
                    values[(title, lang, col)] = float(raw)
    return values
