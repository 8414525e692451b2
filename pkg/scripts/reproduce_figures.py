#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
图像数据批量复现脚本 (Reproduce Figures)
一次生成四组图的 CSV 与 SVG：

  phase_f5_xi*: f=5.0 时 xi = 0, 0.2, 0.4, 0.6 的相图，并给出每个面板的分类
  bifurcation_f_xi0.5: xi=0.5 时沿 f 的分岔图
  bifurcation_xi_f5: f=5.0 时沿 xi 的分岔图
  bifurcation_xi_f8: f=8.0 时沿 xi 的分岔图

运行模式：
  - REPRO_TEST_MODE=true  → 测试模式：每条扫描 40 个点、暂态 100 个周期
  - REPRO_TEST_MODE=false → 完整模式：每条扫描 500 个点、暂态 200 个周期
"""

import os
import sys
import time
from pathlib import Path
from typing import Optional, Dict, List, Tuple

# 添加项目路径
sys.path.insert(0, str(Path(__file__).parent.parent))
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))
sys.path.insert(0, str(Path(__file__).parent.parent / 'utils'))

# 导入共享模块
from evaluation.eval_common import (
    load_config,
    print_header,
    print_config,
    get_output_path,
    BaseLogger
)
from pdmchaos.analysis import classify
from pdmchaos.errors import PDMError
from pdmchaos.integrate import IntegratorConfig, integrate_phase_portrait
from pdmchaos.model import DEFAULT_INITIAL_STATE, Params
from pdmchaos.output import (
    RunManifest,
    SvgAxes,
    bifurcation_table,
    render_svg,
    strobe_table,
    write_csv,
    write_svg,
)
from pdmchaos.sweep import ICMode, SweepAxis, SweepConfig, bifurcation_scan


# 相图面板的 xi 取值
PHASE_PANELS = [0.0, 0.2, 0.4, 0.6]

# (名称, 扫描轴, 起点, 终点, 固定参数)
BIFURCATION_FIGURES: List[Tuple[str, SweepAxis, float, float, Dict[str, float]]] = [
    ("bifurcation_f_xi0.5", SweepAxis.F, 0.1, 10.0, {"xi": 0.5}),
    ("bifurcation_xi_f5", SweepAxis.XI, 0.0, 2.2, {"f": 5.0}),
    ("bifurcation_xi_f8", SweepAxis.XI, 0.0, 2.2, {"f": 8.0}),
]


# =============================================================================
# 日志记录器
# =============================================================================

class FigureLogger(BaseLogger):
    """复现脚本日志记录器"""

    def __init__(self, verbose: bool = True):
        super().__init__(verbose)
        self.stats = {
            "panels_written": 0,
            "sweeps_written": 0,
            "sweep_points": 0,
            "failed_points": 0,
            "errors": 0
        }

    def log_written(self, csv_path: str, svg_path: str, rows: int):
        """记录一组输出文件"""
        self.log("SUCCESS", f"已写出 {csv_path}", svg=svg_path, rows=rows)


# =============================================================================
# 核心函数
# =============================================================================

def _write_outputs(table, manifest: RunManifest, x, y, axes: SvgAxes, config: Dict, name: str,
                   started: float, logger: FigureLogger):
    csv_path = get_output_path(config, f"{name}.csv")
    svg_path = get_output_path(config, f"{name}.svg")
    write_csv(table.with_comments(manifest.comment_lines()), csv_path)
    manifest.duration_seconds = time.perf_counter() - started
    manifest.write_sidecar(csv_path)
    write_svg(render_svg(x, y, axes), svg_path)
    logger.log_written(csv_path, svg_path, len(table))


def run_phase_panels(config: Dict, logger: FigureLogger, integrator: IntegratorConfig):
    """相图面板与单点分类"""
    print_header("相图 (f=5.0)", level=2)
    for xi in PHASE_PANELS:
        started = time.perf_counter()
        p = Params(xi=xi, f=5.0)
        try:
            series = integrate_phase_portrait(DEFAULT_INITIAL_STATE, p,
                                              n_transient=config["n_transient"], cfg=integrator)
            verdict = classify(p, n_transient=config["n_transient"], cfg=integrator)
        except PDMError as e:
            logger.log("ERROR", f"xi={xi} 相图失败: {e}")
            logger.stats["errors"] += 1
            continue
        logger.log("CLASSIFY", f"xi={xi}: {verdict.label}", lambda_max=f"{verdict.lambda_max:.4f}")
        manifest = RunManifest("phase", p, DEFAULT_INITIAL_STATE, integrator,
                               {"n_transient": config["n_transient"], "n_periods": 50,
                                "samples_per_period": 100, "strobe": False})
        axes = SvgAxes(x_label="x", y_label="xdot", annotation=f"f=5 xi={xi:g} ({verdict.label})")
        _write_outputs(strobe_table(series), manifest, series.x, series.y, axes, config,
                       f"phase_f5_xi{xi:g}", started, logger)
        logger.stats["panels_written"] += 1


def run_bifurcations(config: Dict, logger: FigureLogger, integrator: IntegratorConfig):
    """三条分岔图扫描"""
    for name, axis, start, stop, fixed in BIFURCATION_FIGURES:
        print_header(f"{name}: {axis.value} ∈ [{start}, {stop}]", level=2)
        started = time.perf_counter()
        base = Params().with_values(**fixed)
        sweep_cfg = SweepConfig(axis=axis, start=start, stop=stop, steps=config["steps"], base=base,
                                initial=DEFAULT_INITIAL_STATE, ic_mode=ICMode.FIXED,
                                n_transient=config["n_transient"], n_samples=config["n_samples"],
                                integrator=integrator)
        try:
            data = bifurcation_scan(sweep_cfg, workers=config["threads"], progress=True)
        except PDMError as e:
            logger.log("ERROR", f"{name} 扫描失败: {e}")
            logger.stats["errors"] += 1
            continue
        failed = int(data.failed.sum())
        logger.log("SWEEP", f"{name} 完成", points=sweep_cfg.steps, failed=failed)
        manifest = RunManifest("bifurcation", base, DEFAULT_INITIAL_STATE, integrator,
                               sweep_cfg.to_dict())
        table = bifurcation_table(data)
        param, _, x, _ = table.columns
        axes = SvgAxes(x_label=axis.value, y_label="x (strobe)", annotation=name)
        _write_outputs(table, manifest, param, x, axes, config, name, started, logger)
        logger.stats["sweeps_written"] += 1
        logger.stats["sweep_points"] += sweep_cfg.steps
        logger.stats["failed_points"] += failed


def run_reproduction(
    config: Optional[Dict] = None,
    logger: Optional[FigureLogger] = None
) -> bool:
    """
    复现主函数

    Args:
        config: 配置字典
        logger: 日志记录器

    Returns:
        bool: 是否全部成功
    """
    if config is None:
        config = load_config()

    if logger is None:
        logger = FigureLogger(verbose=True)

    print_header("PDM Duffing 图像数据复现")
    print_config(config)

    os.makedirs(config["output_dir"], exist_ok=True)
    integrator = IntegratorConfig()

    start_time = time.time()
    run_phase_panels(config, logger, integrator)
    run_bifurcations(config, logger, integrator)
    elapsed = time.time() - start_time

    logger.stats["elapsed_seconds"] = round(elapsed, 1)
    logger.print_stats("复现统计")
    return logger.stats["errors"] == 0


# =============================================================================
# 主函数
# =============================================================================

def main():
    """主函数"""
    import argparse

    parser = argparse.ArgumentParser(
        description="PDM Duffing 图像数据复现 (Reproduce Figures)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
功能说明:
  生成四个相图面板与三条分岔图的 CSV、SVG 与运行清单

示例:
  # 默认：根据 REPRO_TEST_MODE 环境变量决定扫描精细程度
  python reproduce_figures.py

  # 指定输出目录
  python reproduce_figures.py --output-dir results/

环境变量配置（.env）:
  REPRO_TEST_MODE=true     # 测试模式（40 点扫描）
  REPRO_TEST_MODE=false    # 完整模式（500 点扫描）
  REPRO_OUTPUT_DIR=figures # 输出目录
  PDM_THREADS=8            # 扫描线程数
        """
    )

    parser.add_argument(
        '-o', '--output-dir',
        default=None,
        help='输出目录（覆盖 .env 中的 REPRO_OUTPUT_DIR）'
    )

    parser.add_argument(
        '--full',
        action='store_true',
        help='强制完整模式（500 点扫描）'
    )

    args = parser.parse_args()

    # 加载配置
    config = load_config()

    # 命令行参数覆盖
    if args.output_dir is not None:
        config['output_dir'] = args.output_dir
    if args.full:
        config.update(test_mode=False, steps=500, n_transient=200)

    success = run_reproduction(config=config)

    # 返回退出码
    sys.exit(0 if success else 1)


if __name__ == "__main__":
    main()
