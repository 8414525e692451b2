#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
命令行入口
子命令：simulate / phase / bifurcation / lyapunov / classify / verify

退出码：
  0 成功
  1 用法错误（未知参数、非法参数值）
  2 数值失败或 I/O 失败
  3 验证未通过
"""

import argparse
import math
import sys
import time
from typing import BinaryIO, List, Optional, Sequence

from dotenv import load_dotenv

from .analysis import classify
from .errors import PDMError, ParameterError
from .event_log import EventLogger, set_event_logger
from .integrate import IntegratorConfig, integrate_adaptive, integrate_phase_portrait, integrate_strobe
from .model import Params, State
from .output import (
    CsvTable,
    RunManifest,
    SvgAxes,
    bifurcation_table,
    lyapunov_table,
    render_svg,
    strobe_table,
    trajectory_table,
    write_csv,
    write_svg,
)
from .sweep import ICMode, SweepAxis, SweepConfig, bifurcation_scan, lyapunov_scan
from .verification import format_report, run_checks

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_VERIFY = 3


class UsageError(Exception):
    """命令行参数无法解析"""


class _Parser(argparse.ArgumentParser):
    """解析失败时抛出 UsageError，而不是直接退出进程"""

    def error(self, message):
        raise UsageError(message)


def _finite_float(text: str) -> float:
    """argparse 类型：拒绝 nan 与 inf"""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"不是数值: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"必须是有限数值: {text!r}")
    return value


# =============================================================================
# 参数定义
# =============================================================================

def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    phys = common.add_argument_group("物理参数")
    phys.add_argument('--xi', type=_finite_float, default=0.0, help='PDM 指数 xi >= 0 (默认: 0.0)')
    phys.add_argument('--omega0-sq', type=_finite_float, default=0.25, help='固有频率平方 (默认: 0.25)')
    phys.add_argument('--lam', '--lambda', dest='lam', type=_finite_float, default=1.0,
                      help='四次项系数 lambda (默认: 1.0)')
    phys.add_argument('--alpha', type=_finite_float, default=0.2, help='阻尼系数 (默认: 0.2)')
    phys.add_argument('--f', type=_finite_float, default=5.0, help='驱动幅度 (默认: 5.0)')
    phys.add_argument('--omega', type=_finite_float, default=1.0, help='驱动角频率 > 0 (默认: 1.0)')

    init = common.add_argument_group("初始状态")
    init.add_argument('--x0', type=_finite_float, default=0.1, help='初始位置 (默认: 0.1)')
    init.add_argument('--y0', type=_finite_float, default=0.1, help='初始速度 (默认: 0.1)')
    init.add_argument('--z0', type=_finite_float, default=0.0, help='初始驱动相位 (默认: 0.0)')

    integ = common.add_argument_group("积分器")
    integ.add_argument('--rtol', type=_finite_float, default=1e-9, help='相对容差 (默认: 1e-9)')
    integ.add_argument('--atol', type=_finite_float, default=1e-9, help='绝对容差 (默认: 1e-9)')
    integ.add_argument('--h-init', type=_finite_float, default=1e-3, help='初始步长 (默认: 1e-3)')
    integ.add_argument('--h-max', type=_finite_float, default=None, help='最大步长 (默认: 2*pi/(20*omega))')
    integ.add_argument('--max-steps', type=int, default=10 ** 8, help='步数预算 (默认: 1e8)')

    out = common.add_argument_group("输出与日志")
    out.add_argument('-o', '--out', default='-', help='CSV 输出路径，- 为标准输出 (默认: -)')
    out.add_argument('--svg', default=None, help='同时写出 SVG 散点图到该路径')
    out.add_argument('--log-mode', choices=['plain', 'json'], default=None, help='日志格式')
    out.add_argument('--log-level', choices=['debug', 'info', 'warn', 'error'], default=None,
                     help='日志级别')
    out.add_argument('--log-file', default=None, help='日志文件路径')
    return common


def _add_sweep_options(parser: argparse.ArgumentParser, with_samples: bool):
    parser.add_argument('--axis', choices=[a.value for a in SweepAxis], default='f',
                        help='扫描参数 (默认: f)')
    parser.add_argument('--start', type=_finite_float, default=0.1, help='起点 (默认: 0.1)')
    parser.add_argument('--stop', type=_finite_float, default=10.0, help='终点 (默认: 10.0)')
    parser.add_argument('--steps', type=int, default=500, help='点数 >= 2 (默认: 500)')
    parser.add_argument('--ic-mode', choices=[m.value for m in ICMode], default='fixed',
                        help='初值模式 (默认: fixed)')
    parser.add_argument('--transient', type=int, default=200, help='暂态周期数 (默认: 200)')
    if with_samples:
        parser.add_argument('--samples', type=int, default=128, help='每点频闪采样数 (默认: 128)')
    parser.add_argument('--threads', type=int, default=None, help='线程数（覆盖 PDM_THREADS）')
    parser.add_argument('--no-progress', action='store_true', help='不显示进度条')


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(
        prog="pdmchaos",
        description="PDM 受迫阻尼 Duffing 振子：模拟、相图、分岔图、Lyapunov 扫描与分类",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  # 相图（xi=0 时为周期 1 极限环）
  pdmchaos phase --f 5 --xi 0 --out phase.csv --svg phase.svg

  # 沿 f 的分岔图
  pdmchaos bifurcation --axis f --start 0.1 --stop 10 --steps 500 --xi 0.5 --out bif.csv

  # 单点分类
  pdmchaos classify --f 5 --xi 0.2

  # 内置验证
  pdmchaos verify

环境变量配置（.env）:
  PDM_THREADS=8          # 扫描线程数上限
  PDM_LOG_MODE=json      # 日志格式 plain | json
  PDM_LOG_LEVEL=debug    # 日志级别
  PDM_LOG_FILE=logs/pdm.log
        """
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    simulate = sub.add_parser('simulate', parents=[common], help='轨迹 CSV (t,x,y,z)')
    simulate.add_argument('--t0', type=_finite_float, default=0.0, help='起始时刻 (默认: 0.0)')
    simulate.add_argument('--t1', type=_finite_float, default=100.0, help='终止时刻 (默认: 100.0)')

    phase = sub.add_parser('phase', parents=[common], help='暂态后的相图 CSV (k,x,y)')
    phase.add_argument('--transient', type=int, default=200, help='暂态周期数 (默认: 200)')
    phase.add_argument('--periods', type=int, default=50, help='记录的驱动周期数 (默认: 50)')
    phase.add_argument('--samples-per-period', type=int, default=100,
                       help='每个驱动周期的采样数 (默认: 100)')
    phase.add_argument('--strobe', action='store_true', help='每个驱动周期只采一个点（频闪截面）')

    bifurcation = sub.add_parser('bifurcation', parents=[common], help='分岔图 CSV (param,k,x,y)')
    _add_sweep_options(bifurcation, with_samples=True)

    lyapunov = sub.add_parser('lyapunov', parents=[common], help='Lyapunov 扫描 CSV (param,lambda_max)')
    _add_sweep_options(lyapunov, with_samples=False)

    cls = sub.add_parser('classify', parents=[common], help='单点吸引子分类')
    cls.add_argument('--transient', type=int, default=200, help='暂态周期数 (默认: 200)')
    cls.add_argument('--samples', type=int, default=128, help='频闪采样数 (默认: 128)')

    sub.add_parser('verify', parents=[common], help='运行内置验证套件')
    return parser


# =============================================================================
# 参数到配置
# =============================================================================

def _params(args) -> Params:
    return Params(xi=args.xi, omega0_sq=args.omega0_sq, lam=args.lam, alpha=args.alpha,
                  f=args.f, omega=args.omega)


def _initial(args) -> State:
    return State(args.x0, args.y0, args.z0)


def _integrator(args) -> IntegratorConfig:
    return IntegratorConfig(rel_tol=args.rtol, abs_tol=args.atol, h_init=args.h_init,
                            h_max=args.h_max, max_steps=args.max_steps)


def _sweep_config(args, p: Params, s0: State, cfg: IntegratorConfig) -> SweepConfig:
    return SweepConfig(
        axis=SweepAxis(args.axis),
        start=args.start,
        stop=args.stop,
        steps=args.steps,
        base=p,
        initial=s0,
        ic_mode=ICMode(args.ic_mode),
        n_transient=args.transient,
        n_samples=getattr(args, "samples", 128),
        integrator=cfg,
    )


def _annotation(p: Params) -> str:
    return (f"xi={p.xi:g} f={p.f:g} omega={p.omega:g} omega0^2={p.omega0_sq:g} "
            f"lambda={p.lam:g} alpha={p.alpha:g}")


# =============================================================================
# 输出
# =============================================================================

def _emit_table(args, table: CsvTable, manifest: RunManifest, started: float,
                stdout: BinaryIO, logger: EventLogger):
    table = table.with_comments(manifest.comment_lines())
    if args.out == '-':
        write_csv(table, stdout)
        logger.log("output_written", level="debug", path="<stdout>", rows=len(table))
        return
    write_csv(table, args.out)
    manifest.duration_seconds = time.perf_counter() - started
    sidecar = manifest.write_sidecar(args.out)
    logger.log("output_written", level="info", path=args.out, rows=len(table), manifest=sidecar)


def _emit_svg(args, x, y, axes: SvgAxes, logger: EventLogger):
    if not args.svg:
        return
    write_svg(render_svg(x, y, axes), args.svg)
    logger.log("output_written", level="info", path=args.svg)


def _write_text(stdout: BinaryIO, text: str):
    stdout.write(text.encode("utf-8"))
    if hasattr(stdout, "flush"):
        stdout.flush()


# =============================================================================
# 子命令
# =============================================================================

def cmd_simulate(args, stdout: BinaryIO, logger: EventLogger, started: float) -> int:
    p, s0, cfg = _params(args), _initial(args), _integrator(args)
    traj = integrate_adaptive(s0, args.t0, args.t1, p, cfg)
    manifest = RunManifest("simulate", p, s0, cfg, {"t0": float(args.t0), "t1": float(args.t1)})
    _emit_table(args, trajectory_table(traj), manifest, started, stdout, logger)
    _emit_svg(args, traj.states[:, 0], traj.states[:, 1],
              SvgAxes(x_label="x", y_label="xdot", annotation=_annotation(p)), logger)
    return EXIT_OK


def cmd_phase(args, stdout: BinaryIO, logger: EventLogger, started: float) -> int:
    p, s0, cfg = _params(args), _initial(args), _integrator(args)
    if args.strobe:
        series = integrate_strobe(s0, p, n_transient=args.transient, n_samples=args.periods, cfg=cfg)
    else:
        series = integrate_phase_portrait(s0, p, n_transient=args.transient, n_periods=args.periods,
                                          samples_per_period=args.samples_per_period, cfg=cfg)
    options = {"n_transient": args.transient, "n_periods": args.periods,
               "samples_per_period": 1 if args.strobe else args.samples_per_period,
               "strobe": bool(args.strobe)}
    manifest = RunManifest("phase", p, s0, cfg, options)
    _emit_table(args, strobe_table(series), manifest, started, stdout, logger)
    _emit_svg(args, series.x, series.y,
              SvgAxes(x_label="x", y_label="xdot", annotation=_annotation(p)), logger)
    return EXIT_OK


def cmd_bifurcation(args, stdout: BinaryIO, logger: EventLogger, started: float) -> int:
    p, s0, cfg = _params(args), _initial(args), _integrator(args)
    sweep_cfg = _sweep_config(args, p, s0, cfg)
    data = bifurcation_scan(sweep_cfg, workers=args.threads, progress=not args.no_progress,
                            logger=logger)
    manifest = RunManifest("bifurcation", p, s0, cfg, sweep_cfg.to_dict())
    table = bifurcation_table(data)
    _emit_table(args, table, manifest, started, stdout, logger)
    param, _, x, _ = table.columns
    _emit_svg(args, param, x, SvgAxes(x_label=sweep_cfg.axis.value, y_label="x (strobe)",
                                      annotation=_annotation(p)), logger)
    return EXIT_OK


def cmd_lyapunov(args, stdout: BinaryIO, logger: EventLogger, started: float) -> int:
    p, s0, cfg = _params(args), _initial(args), _integrator(args)
    sweep_cfg = _sweep_config(args, p, s0, cfg)
    scan = lyapunov_scan(sweep_cfg, workers=args.threads, progress=not args.no_progress,
                         logger=logger)
    options = sweep_cfg.to_dict()
    del options["n_samples"]
    manifest = RunManifest("lyapunov", p, s0, cfg, options)
    _emit_table(args, lyapunov_table(scan), manifest, started, stdout, logger)
    _emit_svg(args, scan.values, scan.lambda_max,
              SvgAxes(x_label=sweep_cfg.axis.value, y_label="lambda_max",
                      annotation=_annotation(p)), logger)
    return EXIT_OK


def cmd_classify(args, stdout: BinaryIO, logger: EventLogger, started: float) -> int:
    p, s0, cfg = _params(args), _initial(args), _integrator(args)
    result = classify(p, s0, n_transient=args.transient, n_samples=args.samples, cfg=cfg,
                      logger=logger)
    period = "none" if result.detected_period is None else str(result.detected_period)
    _write_text(stdout, f"{result.label}\nlambda_max={result.lambda_max:.17g} detected_period={period}\n")
    return EXIT_OK


def cmd_verify(args, stdout: BinaryIO, logger: EventLogger, started: float) -> int:
    results = run_checks(logger=logger)
    _write_text(stdout, format_report(results) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


COMMANDS = {
    "simulate": cmd_simulate,
    "phase": cmd_phase,
    "bifurcation": cmd_bifurcation,
    "lyapunov": cmd_lyapunov,
    "classify": cmd_classify,
    "verify": cmd_verify,
}


# =============================================================================
# 入口
# =============================================================================

def run(argv: Optional[Sequence[str]] = None, stdout: Optional[BinaryIO] = None) -> int:
    """
    执行一条命令

    Args:
        argv: 命令行参数（不含程序名），None 时取 sys.argv[1:]
        stdout: 数据输出的二进制流，默认 sys.stdout.buffer

    Returns:
        退出码
    """
    parser = build_parser()
    argv: List[str] = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"pdmchaos: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    logger = EventLogger(log_mode=args.log_mode, log_level=args.log_level, log_file=args.log_file)
    set_event_logger(logger)
    stdout = stdout if stdout is not None else sys.stdout.buffer
    started = time.perf_counter()
    logger.log("cli_start", level="info", command=args.command)
    try:
        code = COMMANDS[args.command](args, stdout, logger, started)
    except ParameterError as e:
        logger.log("cli_error", level="error", command=args.command, error=str(e))
        parser.print_usage(sys.stderr)
        print(f"pdmchaos: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (PDMError, OSError) as e:
        logger.log("cli_error", level="error", command=args.command,
                   error=f"{type(e).__name__}: {e}")
        return EXIT_NUMERIC
    logger.log("cli_done", level="info", command=args.command, exit_code=code,
               seconds=round(time.perf_counter() - started, 3))
    return code


def main():
    """控制台入口"""
    load_dotenv()
    sys.exit(run())


if __name__ == "__main__":
    main()
