"""
Spike Regions Lab Orchestrator
Wires network construction, simulation, temporal partitions and region counting
into reproducible runs with JSON / CSV artifacts
"""
import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from config import Config, parse_box
from src import __version__
from src.errors import NetworkFileError, ValidationError
from src.snn_core import (
    Network, arithmetic_for, decode, load_network, random_network, save_network, simulate,
)
from src.constructors import (
    PolyhedronSpec, identity_network, indicator_network, l2_error_exact, lipschitz_network,
    load_step_spec, ramp_target, staircase_network, staircase_target, step_network, sup_error_exact,
)
from src.temporal import ShiftTrajectory, TemporalPartition, neuron_partition, shift_trajectory
from src.regions import (
    CountReport, constant_regions_2d, count_bound, count_exact_2d, first_layer_families,
    general_position_layer, sample_patterns,
)

BUILD_KINDS = ("identity", "indicator", "step", "lipschitz", "general-position")
TABLE1_ROWS = ((1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4))


class RunConfig(BaseModel):
    """One command invocation: environment configuration plus command-line overrides"""
    command: str
    mode: str = "exact"
    tolerance: float = 1e-9
    seed: int = 0
    box: str = "-1,1x-1,1"
    samples: int = 100000
    output_dir: Path = Path("./results")
    overrides: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_config(cls, config: Config, command: str, **overrides) -> "RunConfig":
        overrides = {key: value for key, value in overrides.items() if value is not None}
        fields = {
            "mode": config.mode,
            "tolerance": config.tolerance,
            "seed": config.seed,
            "box": config.box,
            "samples": config.samples,
            "output_dir": config.output_dir,
        }
        for key in list(fields):
            if key in overrides:
                fields[key] = overrides[key]
        return cls(command=command, overrides=overrides, **fields)

    def manifest(self) -> Dict[str, Any]:
        """Run description embedded in every artifact"""
        return {
            "command": self.command,
            "mode": self.mode,
            "seed": self.seed,
            "version": __version__,
            "overrides": {key: _plain(value) for key, value in sorted(self.overrides.items())},
        }


def _plain(value):
    """JSON-safe rendering of override values"""
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


class SpikeRegionsLab:
    """
    Runs every command of the spike-regions CLI

    Each cmd_* method returns its in-memory result and writes its artifacts
    below the configured output directory.
    """

    def __init__(self, config: Config):
        """
        Initialize the lab

        Args:
            config: Configuration object
        """
        self.config = config
        errors = config.validate_config()
        if errors:
            raise ValidationError("; ".join(errors))
        logger.info(f"SpikeRegionsLab ready (mode={config.mode}, seed={config.seed}, output={config.output_dir})")

    # ------------------------------------------------------------------ helpers

    def _run(self, command: str, **overrides) -> RunConfig:
        run = RunConfig.from_config(self.config, command, **overrides)
        if run.mode not in ("exact", "float"):
            raise ValidationError(f"Unknown numeric mode: {run.mode!r}")
        return run

    @staticmethod
    def _arithmetic(run: RunConfig):
        return arithmetic_for(run.mode, run.tolerance)

    @staticmethod
    def _target(run: RunConfig, output: Optional[Path], default_name: str) -> Path:
        return Path(output) if output else Path(run.output_dir) / default_name

    @staticmethod
    def _write_text(path: Path, text: str) -> Path:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            logger.error(f"Could not write {path}: {e}")
            raise NetworkFileError(f"Could not write {path}: {e}") from e
        logger.info(f"Wrote {path}")
        return path

    def _write_json(self, path: Path, run: RunConfig, payload: Dict[str, Any]) -> Path:
        document = {"manifest": run.manifest(), **payload}
        return self._write_text(path, json.dumps(document, indent=2) + "\n")

    def _write_csv(self, path: Path, run: RunConfig, rows: List[Dict[str, str]], fieldnames: Sequence[str]) -> Path:
        """CSV with the manifest as a leading '#' comment line"""
        buffer = io.StringIO()
        buffer.write("# " + json.dumps(run.manifest(), sort_keys=True) + "\n")
        writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return self._write_text(path, buffer.getvalue())

    # ------------------------------------------------------------------ build

    def cmd_build(self, kind: str, output: Optional[Path] = None, **params) -> Tuple[Path, Network, Dict[str, Any]]:
        """
        Construct a network and write it as JSON

        Args:
            kind: one of identity, indicator, step, lipschitz, general-position
            output: destination file (output_dir/<kind>.json if omitted)
            **params: parameters of the chosen constructor

        Returns:
            (path written, network, metadata embedded in the file)
        """
        if kind not in BUILD_KINDS:
            raise ValidationError(f"Unknown network kind '{kind}' (expected one of {', '.join(BUILD_KINDS)})")
        run = self._run("build", kind=kind, **params)
        arithmetic = self._arithmetic(run)
        extra: Dict[str, Any] = {}

        if kind == "identity":
            net = identity_network(params["n"], params["T"], params["L"], params.get("epsilon"), arithmetic)
        elif kind == "indicator":
            poly = PolyhedronSpec.create(params["A"], params["b"], arithmetic)
            net = indicator_network(poly, arithmetic)
        elif kind == "step":
            net = step_network(load_step_spec(params["spec"], arithmetic), arithmetic)
        elif kind == "lipschitz":
            net, report = self._lipschitz(run, params, arithmetic)
            extra["approximation"] = report.to_dict()
        else:
            net = general_position_layer(params["n1"], params["T"], arithmetic)
            count, _ = count_exact_2d(first_layer_families(net), with_cells=False)
            extra["regions"] = count
            extra["bound"] = count_bound(params["n1"], 2, params["T"])

        metadata = {**run.manifest(), "kind": kind, "summary": net.summary(), **extra}
        path = save_network(net, self._target(run, output, f"{kind}.json"), metadata)
        return path, net, metadata

    @staticmethod
    def _lipschitz(run: RunConfig, params: Dict[str, Any], arithmetic):
        gamma = arithmetic.scalar(params["gamma"])
        box = parse_box(params.get("box") or run.box)
        if len(box) == 1:
            f = ramp_target(gamma, box[0], arithmetic)
        else:
            def f(point):
                return gamma * point[0]
        return lipschitz_network(f, gamma, params["eps"], box, arithmetic)

    # ------------------------------------------------------------------ regions

    def cmd_regions(
        self,
        network_path: Path,
        method: str = "exact2d",
        layer: Optional[int] = None,
        box: Optional[str] = None,
        samples: Optional[int] = None,
        output: Optional[Path] = None
    ) -> CountReport:
        """
        Count activation and constant regions of a network file

        Args:
            network_path: network JSON
            method: "exact2d" or "sample"
            layer: last layer whose trains are counted
            box: "lo,hi x lo,hi"; exact2d encloses every vertex when omitted
            samples: sample count override
            output: report JSON path; the CSV sits next to it

        Returns:
            CountReport
        """
        if method not in ("exact2d", "sample"):
            raise ValidationError(f"Unknown counting method '{method}'")
        run = self._run("regions", network=str(network_path), method=method, layer=layer,
                        box=box, samples=samples)
        net = load_network(network_path, run.tolerance if run.mode == "float" else None)

        if method == "exact2d":
            report = constant_regions_2d(net, parse_box(box) if box else None, layer)
            rows = report.complex.to_csv_rows()
            fieldnames = ["cell_id", "x", "y", "pattern", "output"]
        else:
            report = sample_patterns(net, parse_box(run.box), run.samples, layer, seed=run.seed)
            rows = [{"layer": str(index), "patterns": str(count)}
                    for index, count in enumerate(report.layer_counts, start=1)]
            fieldnames = ["layer", "patterns"]

        json_path = self._target(run, output, f"regions_{Path(network_path).stem}.json")
        self._write_json(json_path, run, {"report": report.to_dict()})
        self._write_csv(json_path.with_suffix(".csv"), run, rows, fieldnames)
        return report

    # ------------------------------------------------------------------ temporal

    def cmd_shifts(self, beta, theta, u0, z, T: int, output: Optional[Path] = None) -> ShiftTrajectory:
        """
        Realized shift trajectory of one neuron, written as CSV

        Args:
            beta, theta, u0: neuron parameters
            z: pre-activation
            T: latency
            output: CSV path

        Returns:
            ShiftTrajectory
        """
        run = self._run("shifts", beta=beta, theta=theta, u0=u0, z=z, T=T)
        trajectory = shift_trajectory(z, beta, theta, u0, T, self._arithmetic(run))
        self._write_csv(self._target(run, output, "shifts.csv"), run, trajectory.to_csv_rows(),
                        ["t", "z_star", "bit", "repeat"])
        period = detect_period(trajectory)
        if period:
            logger.info(f"Shift sequence settles into period {period}")
        return trajectory

    def cmd_partition(self, beta, theta, u0, T: int, output: Optional[Path] = None) -> TemporalPartition:
        """Temporal partition of one neuron, written as CSV"""
        run = self._run("partition", beta=beta, theta=theta, u0=u0, T=T)
        partition = neuron_partition(beta, theta, u0, T, self._arithmetic(run))
        self._write_csv(self._target(run, output, "partition.csv"), run, partition.to_csv_rows(),
                        ["interval_lo", "interval_hi", "pattern"])
        return partition

    # ------------------------------------------------------------------ approximation

    def cmd_approx(
        self,
        target: str,
        gamma=None,
        eps=None,
        K: Optional[int] = None,
        output: Optional[Path] = None
    ) -> Dict[str, Any]:
        """
        Build an approximant and report its exact errors

        Args:
            target: "ramp" (f(x) = gamma x on [0, 1)) or "staircase" (K unit steps of height eps)
            gamma: ramp slope
            eps: accuracy (ramp) or step height (staircase)
            K: staircase steps
            output: report JSON path

        Returns:
            Report dictionary
        """
        run = self._run("approx", target=target, gamma=gamma, eps=eps, K=K)
        arithmetic = self._arithmetic(run)
        if target == "ramp":
            if gamma is None or eps is None:
                raise ValidationError("The ramp target needs --gamma and --eps")
            _, approx = lipschitz_network(ramp_target(gamma, (0, 1), arithmetic), gamma, eps, [(0, 1)], arithmetic)
            report = {"target": "ramp", **approx.to_dict()}
        elif target == "staircase":
            if K is None or eps is None:
                raise ValidationError("The staircase target needs --K and --eps")
            net = staircase_network(K, eps, arithmetic)
            sup = sup_error_exact(net, staircase_target(K, eps, arithmetic), (0, K))
            report = {
                "target": "staircase",
                "K": K,
                "epsilon": arithmetic.serialize(eps),
                "widths": list(net.widths),
                "sup_error": arithmetic.serialize(sup),
                "l2_error_sq": arithmetic.serialize(l2_error_exact(net, K, eps)),
            }
        else:
            raise ValidationError(f"Unknown approximation target '{target}'")

        self._write_json(self._target(run, output, f"approx_{target}.json"), run, {"report": report})
        return report

    # ------------------------------------------------------------------ experiments

    def cmd_table1(self, random_nets: int = 5, output: Optional[Path] = None) -> List[Dict[str, Any]]:
        """
        Region counts for n_in = 2: closed-form bound, general-position
        construction and the mean over random first layers

        Args:
            random_nets: random networks per row
            output: CSV path

        Returns:
            One dict per (T, n1) row
        """
        run = self._run("table1", random_nets=random_nets)
        rng = np.random.default_rng(run.seed)
        rows = []
        for T, n1 in TABLE1_ROWS:
            theory = count_bound(n1, 2, T)
            constructed, _ = count_exact_2d(first_layer_families(general_position_layer(n1, T)), with_cells=False)
            counts = []
            for _ in range(random_nets):
                net = random_network(rng, 2, [n1], T)
                count, _ = count_exact_2d(first_layer_families(net), with_cells=False)
                counts.append(count)
            mean = sum(counts) / len(counts) if counts else 0.0
            rows.append({
                "T": T,
                "n1": n1,
                "theory": theory,
                "general_position": constructed,
                "random_mean": round(mean, 2),
                "random_counts": counts,
            })
            logger.info(f"T={T}, n1={n1}: theory {theory}, constructed {constructed}, random {counts}")

        csv_rows = [
            {**{key: str(value) for key, value in row.items() if key != "random_counts"},
             "random_counts": " ".join(str(c) for c in row["random_counts"])}
            for row in rows
        ]
        self._write_csv(self._target(run, output, "table1.csv"), run, csv_rows,
                        ["T", "n1", "theory", "general_position", "random_mean", "random_counts"])
        return rows

    # ------------------------------------------------------------------ simulation

    def cmd_simulate(self, network_path: Path, x: Sequence) -> Dict[str, Any]:
        """
        Run a network file on one input

        Returns:
            {"trains": per-layer bit strings, "output": decoded values}
        """
        run = self._run("simulate", network=str(network_path))
        net = load_network(network_path, run.tolerance if run.mode == "float" else None)
        point = [net.arithmetic.scalar(value) for value in x]
        trace = simulate(net, point)
        output = decode(net.decoder, trace.output_train, net.arithmetic)
        return {
            "trains": [train.bitstrings() for train in trace.spikes],
            "output": [net.arithmetic.serialize(value) for value in output],
        }


def detect_period(trajectory: ShiftTrajectory, tolerance: float = 1e-6, settle: int = 8) -> Optional[int]:
    """
    Smallest period p such that the last `settle` shift values repeat with period p within tolerance

    Args:
        trajectory: realized shifts
        tolerance: absolute tolerance on |z*_t - z*_{t-p}|
        settle: trailing steps that must repeat

    Returns:
        Period, or None when the tail is not periodic
    """
    T = trajectory.T
    for period in range(1, T // 2 + 1):
        tail = range(max(period + 1, T - settle + 1), T + 1)
        repeats = set(trajectory.near_repeats(period, tolerance))
        if tail and all(t in repeats for t in tail):
            return period
    return None
