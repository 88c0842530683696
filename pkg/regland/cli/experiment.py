import logging
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np
import tomli_w
from pydantic import ValidationError

from ..analysis import (
    compare_envelopes,
    detect_peaks,
    localization_match,
    residual_sweep,
    thm1_residual,
    thm2_residual,
)
from ..eigen import lowest_eigenpairs, read_eigenpairs_csv, write_eigenpairs_csv
from ..hamiltonian import (
    Potential,
    SourceTerm,
    apply_operator,
    assemble_hamiltonian,
    constant_rhs,
    gen_modulated_rhs,
    gen_piecewise_potential,
    make_grid,
    read_potential_csv,
    read_source_csv,
    write_field_csv,
)
from ..kernel import KernelSpec, eval_gaussian, eval_kernel
from ..landscape import (
    LandscapeSolution,
    generalized_effective_potential,
    inverse_landscape,
    regularized_source,
    solve_landscape,
    write_landscape_csv,
)
from ..regularize import inverse_mean_scale, regularized_potential
from ..stochastic import (
    avg_potential_mc,
    expansion_check,
    fk_reproducing_check,
    khasminskii_check,
    sample_paths,
    scale_for_alpha,
    second_moment_mc,
)
from ..utils import GENERATOR_NAME, EnhancedEventEmitter, RegLandError, derive_seed, io
from ..version import __version__
from . import plots
from ._exceptions import MissingArtifactError, StageInputError
from ._models import ExperimentEvents, ExperimentState, GateResult, StageRecord
from .config import ExperimentConfig, save_config
from .gates import DEFAULT_GATES
from .report import write_report

logger = logging.getLogger(__name__)

CONFIG_FILE = "config.toml"
MANIFEST_FILE = "manifest.toml"
FAILED_MARKER = "FAILED"
POTENTIAL_CSV = "potential.csv"
RHS_CSV = "rhs.csv"
EIGENVALUES_CSV = "eigenvalues.csv"
LANDSCAPE_CSV = "landscape.csv"
GENERALIZED_CSV = "generalized.csv"
RESIDUALS_CSV = "residuals.csv"
SWEEP_CSV = "residual_sweep.csv"
MATCHES_CSV = "matches.csv"
PEAKS_CSV = "peaks.csv"
ENVELOPES_CSV = "envelopes.csv"
FEYNMAN_KAC_CSV = "feynman_kac.csv"
GATES_CSV = "gates.csv"

# Interior points of the Monte Carlo checks, as fractions of Ω.
MC_POINTS = (0.3, 0.4, 0.5, 0.6, 0.7)


def regularized_name(t: float) -> str:
    return f"regularized_t{t:g}.csv"


def module_error(stage: str, error: ValidationError) -> RegLandError:
    """
    The RegLandError a model validator raised inside `error`, or a
    StageInputError naming the stage when the failure is pydantic's own.
    """
    for detail in error.errors():
        cause = detail.get("ctx", {}).get("error")
        if isinstance(cause, RegLandError):
            return cause
    return StageInputError(stage, f"{error.error_count()} invalid value(s) in {error.title}")


class Experiment(EnhancedEventEmitter):
    """
    Experiment runs the pipeline of one ExperimentConfig stage by stage,
    writing every result into the artifact directory.

    Stages pick up the results of earlier stages from memory, or from the
    artifact directory when they run in a separate process (the CLI
    subcommands), and raise MissingArtifactError when neither has them.

    Events:
        StageStarted(name), StageCompleted(StageRecord), ArtifactWritten(Path),
        Gate(Experiment) -> GateResult, Failed(RegLandError).
    """

    def __init__(self, config: ExperimentConfig, workers: Optional[int] = None):
        super(Experiment, self).__init__()

        self.config = config

        # Worker threads for Monte Carlo path generation, None for the default.
        self.workers = workers

        self.state = ExperimentState()

        self.stages: list[StageRecord] = []

        self.gates: list[GateResult] = []

        self.started = datetime.now(timezone.utc)

        self._logger = logger.getChild(config.name)

        for name in config.gates:
            self.on(ExperimentEvents.Gate, DEFAULT_GATES[name])

    @property
    def logger(self):
        return self._logger

    @property
    def directory(self) -> Path:
        return self.config.directory

    @contextmanager
    def stage(self, name: str):
        record = StageRecord(name=name)
        self.stages.append(record)
        self.emit(ExperimentEvents.StageStarted, name)
        self.logger.info(f"Stage {name} started")

        start = time.perf_counter()
        try:
            yield record
        except ValidationError as error:
            record.status = "failed"
            raise module_error(name, error) from error
        except Exception:
            record.status = "failed"
            raise
        else:
            record.status = "ok"
        finally:
            record.seconds = time.perf_counter() - start

        self.emit(ExperimentEvents.StageCompleted, record)
        self.logger.info(f"Stage {name} finished in {record.seconds:.2f}s")

    def written(self, path: Path) -> Path:
        self.emit(ExperimentEvents.ArtifactWritten, path)
        self.logger.info(f"Wrote {path}")
        return path

    # Inputs

    def require_potential(self) -> Potential:
        if self.state.potential is None:
            path = self.directory / POTENTIAL_CSV
            if not path.exists():
                raise MissingArtifactError(POTENTIAL_CSV, "gen-potential")
            self.state.potential = read_potential_csv(path)
        return self.state.potential

    def require_rhs(self) -> SourceTerm:
        if self.state.rhs is None:
            grid = self.require_potential().grid
            if self.config.rhs == "constant":
                self.state.rhs = constant_rhs(grid)
            else:
                path = self.directory / RHS_CSV
                if not path.exists():
                    raise MissingArtifactError(RHS_CSV, "gen-potential")
                self.state.rhs = read_source_csv(path)
        return self.state.rhs

    def require_pairs(self):
        if not self.state.pairs:
            if not (self.directory / EIGENVALUES_CSV).exists():
                raise MissingArtifactError(EIGENVALUES_CSV, "eigen")
            self.state.pairs = read_eigenpairs_csv(self.directory)
        return self.state.pairs

    def require_landscape(self) -> LandscapeSolution:
        if self.state.landscape is None:
            path = self.directory / LANDSCAPE_CSV
            if not path.exists():
                raise MissingArtifactError(LANDSCAPE_CSV, "landscape")
            V = self.require_potential()
            columns = io.read_columns(path)
            H = assemble_hamiltonian(V.grid, V)
            self.state.landscape = LandscapeSolution(
                grid=V.grid,
                values=columns["u"],
                rhs=columns["f"],
                potential=V,
                residual=float(np.max(np.abs(apply_operator(H, columns["u"]) - columns["f"]))),
            )
        return self.state.landscape

    def load_available(self):
        """Load whatever earlier subcommands left in the artifact directory."""
        for load in (self.require_potential, self.require_pairs, self.require_landscape):
            try:
                load()
            except MissingArtifactError:
                continue

    def scales(self) -> list[float]:
        if self.config.t_policy == "inverse-mean":
            return [inverse_mean_scale(self.require_potential())]
        return list(self.config.ts)

    def regularized(self, t: float) -> np.ndarray:
        if t not in self.state.regularized:
            V = self.require_potential()
            self.state.regularized[t] = regularized_potential(V, t, self.config.policy).values
        return self.state.regularized[t]

    # Stages

    def generate(self) -> Potential:
        config = self.config
        with self.stage("gen-potential"):
            grid = make_grid(config.n)
            if config.potential == "piecewise":
                V = gen_piecewise_potential(grid, config.intervals, config.vmax, config.seed)
            else:
                V = read_potential_csv(Path(config.potential_file))
            self.state.potential = V
            self.written(write_field_csv(V, self.directory / POTENTIAL_CSV))

            if config.rhs == "modulated":
                self.state.rhs = gen_modulated_rhs(V.grid, config.seed)
            elif config.rhs == "file":
                self.state.rhs = read_source_csv(Path(config.rhs_file))
            else:
                self.state.rhs = constant_rhs(V.grid)
            self.written(write_field_csv(self.state.rhs, self.directory / RHS_CSV))

            self.written(save_config(config, self.directory / CONFIG_FILE))
        return V

    def eigen(self):
        with self.stage("eigen"):
            V = self.require_potential()
            pairs = lowest_eigenpairs(assemble_hamiltonian(V.grid, V), min(self.config.k, V.grid.n))
            self.state.pairs = pairs
            for path in write_eigenpairs_csv(pairs, V.grid, self.directory):
                self.written(path)
        return pairs

    def landscape(self) -> LandscapeSolution:
        with self.stage("landscape"):
            V = self.require_potential()
            H = assemble_hamiltonian(V.grid, V)
            u = solve_landscape(H, 1.0, V)
            self.state.landscape = u

            t = self.scales()[0]
            f = self.require_rhs()
            if self.config.rhs == "constant":
                self.state.generalized = None
                self.state.effective = generalized_effective_potential(u, t, self.config.policy)
                self.written(
                    write_landscape_csv(u, self.directory / LANDSCAPE_CSV, self.state.effective)
                )
                return u

            self.written(write_landscape_csv(u, self.directory / LANDSCAPE_CSV))
            v = solve_landscape(H, f, V)
            smoothed = regularized_source(v, t, self.config.policy)
            self.state.generalized = v
            self.state.effective = smoothed / v.values
            self.written(
                io.write_columns(
                    self.directory / GENERALIZED_CSV,
                    {
                        "node": np.arange(1, V.grid.n + 1),
                        "x": V.grid.nodes,
                        "f": v.rhs,
                        "f_t": smoothed,
                        "v": v.values,
                        "effective": self.state.effective,
                        "v_over_f_t": v.values / smoothed,
                        "u": u.values,
                    },
                )
            )
        return u

    def regularize(self):
        with self.stage("regularize"):
            V = self.require_potential()
            for t in self.scales():
                gaussian = regularized_potential(V, t, self.config.policy, kind="gaussian")
                self.written(
                    io.write_columns(
                        self.directory / regularized_name(t),
                        {
                            "node": np.arange(1, V.grid.n + 1),
                            "x": V.grid.nodes,
                            "V": V.values,
                            "V_t": self.regularized(t),
                            "V_gauss": gaussian.values,
                        },
                    )
                )

    def residuals(self, sweep: Optional[list[float]] = None):
        sweep = self.config.sweep if sweep is None else sweep
        with self.stage("residuals"):
            V = self.require_potential()
            pairs = self.require_pairs()
            u = self.require_landscape()
            policy = self.config.policy

            rows = []
            self.state.residuals = []
            for t in self.scales():
                for pair in pairs:
                    entry = thm1_residual(pair, V, t, policy)
                    self.state.residuals.append(("eigen", pair.index, entry))
                entry = thm2_residual(u, t, policy)
                self.state.residuals.append(("landscape", 0, entry))

            for kind, index, entry in self.state.residuals:
                rows.append(
                    (kind, index, entry.t, entry.sup_norm, entry.weighted_norm, entry.identity_error, entry.window_size)
                )
            self.written(
                io.write_csv(
                    self.directory / RESIDUALS_CSV,
                    ["kind", "index", "t", "sup_norm", "weighted_norm", "identity_error", "window_size"],
                    rows,
                )
            )

            if sweep:
                self.state.sweeps = [
                    residual_sweep(sweep, pair=pairs[0], V=V, policy=policy),
                    residual_sweep(sweep, u=u, policy=policy),
                ]
                rows = [
                    (report.kind, entry.t, entry.sup_norm, entry.weighted_norm, report.slope, report.weighted_slope)
                    for report in self.state.sweeps
                    for entry in report.entries
                ]
                self.written(
                    io.write_csv(
                        self.directory / SWEEP_CSV,
                        ["kind", "t", "sup_norm", "weighted_norm", "slope", "weighted_slope"],
                        [tuple("" if value is None else value for value in row) for row in rows],
                    )
                )

    def predict(self):
        with self.stage("predict"):
            V = self.require_potential()
            pairs = self.require_pairs()
            u = self.require_landscape()
            t = self.scales()[0]
            gaussian = regularized_potential(V, t, self.config.policy, kind="gaussian").values

            report = localization_match(
                pairs,
                u.values,
                self.regularized(t),
                self.config.tolerance_nodes,
                V=V.values,
                gaussian=gaussian,
            )
            self.state.matches = report

            predictors = list(report.counts)
            rows = []
            for row in report.rows:
                distances = [row.distances[name] for name in predictors]
                rows.append(
                    [row.index, row.peak + 1, V.grid.nodes[row.peak]]
                    + ["" if d is None else d for d in distances]
                )
            self.written(
                io.write_csv(
                    self.directory / MATCHES_CSV,
                    ["index", "peak_node", "peak_x"] + [f"distance_{name}" for name in predictors],
                    rows,
                )
            )

            fields = {
                "landscape": (u.values, "maxima"),
                "regularized": (self.regularized(t), "minima"),
                "potential": (V.values, "minima"),
                "gaussian": (gaussian, "minima"),
            }
            peak_rows = []
            for name, (values, mode) in fields.items():
                peaks = detect_peaks(values, mode)
                for node, prominence in zip(peaks.indices, peaks.prominences):
                    peak_rows.append((name, mode, int(node) + 1, V.grid.nodes[node], prominence))
            self.written(
                io.write_csv(
                    self.directory / PEAKS_CSV,
                    ["predictor", "mode", "node", "x", "prominence"],
                    peak_rows,
                )
            )
        return report

    def agmon(self):
        with self.stage("agmon"):
            pairs = self.require_pairs()
            u = self.require_landscape()
            regularized = self.regularized(self.scales()[0])
            inverse = inverse_landscape(u)

            self.state.envelopes = [compare_envelopes(pair, inverse, regularized) for pair in pairs]
            self.written(
                io.write_csv(
                    self.directory / ENVELOPES_CSV,
                    ["index", "r0", "offset_inverse_u", "offset_V_t", "relative_difference", "within_30_percent"],
                    [
                        (
                            pair.index,
                            envelope.landscape.r0 + 1,
                            envelope.landscape.offset,
                            envelope.regularized.offset,
                            envelope.relative_difference,
                            envelope.within_30_percent,
                        )
                        for pair, envelope in zip(pairs, self.state.envelopes)
                    ],
                )
            )

    def feynman_kac(self, paths: Optional[int] = None):
        config = self.config
        N = config.paths if paths is None else paths
        m = config.substeps
        t = config.mc_t

        with self.stage("feynman-kac"):
            V = self.require_potential()
            pairs = self.require_pairs()
            grid = V.grid
            checks = []

            first = pairs[0]
            x = float(grid.nodes[first.peak])
            ensemble = sample_paths(x, t, m, N, derive_seed(config.seed, 1), self.workers)
            checks.append(fk_reproducing_check(first, first.lambda_, V, x, t, ensemble))

            for i, fraction in enumerate(MC_POINTS):
                x = float(grid.nodes[grid.index_of(fraction)])
                ensemble = sample_paths(x, t, m, N, derive_seed(config.seed, 2, i), self.workers)
                checks.append(avg_potential_mc(V, x, t, ensemble, config.policy))
                if fraction == 0.5:
                    checks.append(second_moment_mc(V, x, t, ensemble, config.policy))
                    self.state.expansion = expansion_check(V, x, t, ensemble, config.policy)

            self.state.mc_checks = checks

            xs = [float(grid.nodes[grid.index_of(fraction)]) for fraction in MC_POINTS]
            scale = scale_for_alpha(V, config.alpha, config.policy) if V.sup > 0 else t
            self.state.khasminskii = khasminskii_check(
                V, scale, xs, m, N, derive_seed(config.seed, 3), config.policy, self.workers
            )

            rows = [
                (
                    check.name,
                    check.x,
                    check.t,
                    check.estimate.mean,
                    check.estimate.stderr,
                    check.target,
                    check.allowance,
                    "" if check.bias_bound is None else check.bias_bound,
                    check.passed,
                )
                for check in checks
            ]
            report = self.state.khasminskii
            if report.skipped:
                rows.append(("khasminskii", "", report.t, "", "", "", "", "", report.notice))
            else:
                rows.append(
                    ("khasminskii", report.argmax, report.t, report.mc_sup, report.stderr, report.bound, 0.0, "", report.passed)
                )
            expansion = self.state.expansion
            rows.append(
                ("expansion-first-order", expansion.x, t, expansion.estimate.mean, expansion.estimate.stderr, expansion.first_order, "", "", "")
            )
            rows.append(
                ("expansion-second-order", expansion.x, t, expansion.estimate.mean, expansion.estimate.stderr, expansion.second_order, "", "", "")
            )
            self.written(
                io.write_csv(
                    self.directory / FEYNMAN_KAC_CSV,
                    ["check", "x", "t", "mean", "stderr", "target", "allowance", "bias_bound", "passed"],
                    rows,
                )
            )

    def plots(self):
        with self.stage("plots"):
            V = self.require_potential()
            x = V.grid.nodes
            u = self.state.landscape
            pairs = self.state.pairs

            if u is not None and pairs:
                self.written(
                    plots.plot_overlay(
                        x,
                        u.values,
                        pairs,
                        self.directory / "overlay.svg",
                        detect_peaks(u.values, "maxima").indices,
                    )
                )

            fields = {"V": V.values}
            for t in self.scales():
                fields[f"V_t, t={t:g}"] = self.regularized(t)
            if u is not None:
                fields["1/u"] = inverse_landscape(u)
            self.written(plots.plot_fields(x, fields, self.directory / "regularized.svg", "Effective potentials"))

            if self.state.generalized is not None:
                v = self.state.generalized
                smoothed = v.values * self.state.effective
                self.written(
                    plots.plot_panels(
                        x,
                        {
                            "right-hand side": {"f": v.rhs, "f*k_t": smoothed},
                            "solution": {"v": v.values},
                            "landscape vs generalized": {
                                "u": u.values / np.max(u.values),
                                "v/(f*k_t)": (1.0 / self.state.effective) / np.max(1.0 / self.state.effective),
                            },
                        },
                        self.directory / "generalized.svg",
                    )
                )

            for report in self.state.sweeps:
                self.written(
                    plots.plot_loglog(
                        {
                            f"sup (slope {report.slope})": (report.ts, report.norms),
                            f"|w|-weighted (slope {report.weighted_slope})": (report.ts, report.weighted_norms),
                        },
                        self.directory / f"residual_sweep_{report.kind}.svg",
                        ylabel="residual norm",
                    )
                )

    # Gates, manifest and report

    def evaluate_gates(self) -> bool:
        results = self.emit_for_results(ExperimentEvents.Gate, self)
        self.gates = [
            result
            if isinstance(result, GateResult)
            else GateResult(name=type(result).__name__, passed=False, detail=str(result))
            for result in results
        ]
        for gate in self.gates:
            level = logging.INFO if gate.passed else logging.WARNING
            self.logger.log(level, f"Gate {gate.name}: {'pass' if gate.passed else 'FAIL'} ({gate.detail})")

        self.written(
            io.write_csv(
                self.directory / GATES_CSV,
                ["gate", "passed", "detail"],
                [(gate.name, gate.passed, gate.detail) for gate in self.gates],
            )
        )
        return all(gate.passed for gate in self.gates)

    def write_manifest(self, status: str) -> Path:
        data = self.config.model_dump(mode="json", exclude_none=True)
        data["run"] = {
            "version": __version__,
            "rng": GENERATOR_NAME,
            "status": status,
            "started": self.started.isoformat(timespec="seconds"),
            "wall_times": {record.name: round(record.seconds, 6) for record in self.stages},
            "gates": {gate.name: gate.passed for gate in self.gates},
        }
        return self.written(io.write_text_atomic(self.directory / MANIFEST_FILE, tomli_w.dumps(data)))

    def fail(self, error: RegLandError):
        message = error.qualified()
        io.write_text_atomic(self.directory / FAILED_MARKER, message + "\n")
        self.write_manifest("failed")
        self.emit(ExperimentEvents.Failed, error)
        self.logger.error(message)

    def report(self) -> Path:
        with self.stage("report"):
            path = write_report(self.directory, self.gates)
        return self.written(path)

    def run(self) -> bool:
        """
        Run every stage, evaluate the gates and write the manifest.

        Returns True iff all enabled gates pass. On a RegLandError the partial
        artifacts stay in place next to a FAILED marker and the error is
        re-raised.
        """
        (self.directory / FAILED_MARKER).unlink(missing_ok=True)
        try:
            self.generate()
            self.eigen()
            self.landscape()
            self.regularize()
            self.residuals()
            self.predict()
            self.agmon()
            if self.config.monte_carlo:
                self.feynman_kac()
            self.plots()
            passed = self.evaluate_gates()
        except RegLandError as error:
            self.fail(error)
            raise

        self.write_manifest("passed" if passed else "gates-failed")
        self.report()
        return passed


def run(config: ExperimentConfig, workers: Optional[int] = None) -> Path:
    """Run the full pipeline of `config` and return its artifact directory."""
    Experiment(config, workers).run()
    return config.directory


def write_kernel_profiles(directory: Path, ts: list[float]) -> list[Path]:
    """Radial profiles of k_t (d=1, 2) and g_t (d=1) at the given scales."""
    directory = Path(directory)
    r = np.geomspace(1e-4, 0.5, 400)

    columns = {"r": r}
    curves = {}
    for t in ts:
        for dimension in (1, 2):
            spec = KernelSpec(dimension=dimension, scale=t)
            columns[f"k_d{dimension}_t{t:g}"] = eval_kernel(spec, r)
        columns[f"g_d1_t{t:g}"] = eval_gaussian(KernelSpec(scale=t), r)
        curves[f"k_t d=1, t={t:g}"] = (r, columns[f"k_d1_t{t:g}"])
        curves[f"k_t d=2, t={t:g}"] = (r, columns[f"k_d2_t{t:g}"])

    return [
        io.write_columns(directory / "kernel_profiles.csv", columns),
        plots.plot_loglog(curves, directory / "kernel_profiles.svg", xlabel="r", ylabel="k_t(r)"),
    ]
