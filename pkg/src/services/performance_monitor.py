"""
Performance monitoring for the RIS Beamforming Simulator.

This module provides the psutil-backed memory monitor and the thread-pool
runner that executes independent sweep tasks while returning their results in
submission order.
"""

import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import psutil

logger = logging.getLogger('RisBeamformingSim.performance_monitor')

T = TypeVar('T')


@dataclass
class PerformanceMetrics:
    """Container for performance metrics."""
    processing_time: float
    memory_peak_mb: float
    memory_start_mb: float
    memory_end_mb: float
    tasks_completed: int
    average_task_time: float


class MemoryMonitor:
    """Monitor memory usage during operations."""

    def __init__(self, interval: float = 0.1):
        """
        Initialize memory monitor.

        Args:
            interval: Sampling period in seconds
        """
        self.process = psutil.Process(os.getpid())
        self.interval = interval
        self.peak_memory = 0.0
        self.start_memory = 0.0
        self.monitoring = False
        self.monitor_thread: Optional[threading.Thread] = None

    def start_monitoring(self):
        """Start memory monitoring in background thread."""
        self.start_memory = self.get_current_memory()
        self.peak_memory = self.start_memory
        self.monitoring = True

        def monitor():
            while self.monitoring:
                try:
                    self.peak_memory = max(self.peak_memory, self.get_current_memory())
                    time.sleep(self.interval)
                except Exception:
                    break

        self.monitor_thread = threading.Thread(target=monitor, daemon=True)
        self.monitor_thread.start()

    def stop_monitoring(self) -> Tuple[float, float, float]:
        """
        Stop monitoring and return metrics.

        Returns:
            Tuple of (start_mb, peak_mb, end_mb)
        """
        self.monitoring = False
        if self.monitor_thread:
            self.monitor_thread.join(timeout=1.0)

        end_memory = self.get_current_memory()
        self.peak_memory = max(self.peak_memory, end_memory)
        return self.start_memory, self.peak_memory, end_memory

    def get_current_memory(self) -> float:
        """Get current memory usage in MB."""
        try:
            return self.process.memory_info().rss / 1024 / 1024
        except Exception:
            return 0.0


class SweepExecutor:
    """
    Runs independent tasks on a thread pool.

    Results come back in submission order whatever order the workers finish
    in, so the output of a sweep never depends on the thread count.
    """

    def __init__(self, threads: int = 1):
        if threads < 1:
            raise ValueError(f"threads must be at least 1, got {threads}")
        self.threads = threads
        self.memory_monitor = MemoryMonitor()
        self.last_metrics: Optional[PerformanceMetrics] = None

    def run(self, tasks: Sequence[Callable[[], T]],
            progress_callback: Optional[Callable[[float, str], None]] = None) -> List[T]:
        """
        Execute every task and collect the results.

        Args:
            tasks: Zero-argument callables
            progress_callback: Optional callback receiving (percent, message)

        Returns:
            One result per task, in task order
        """
        total = len(tasks)
        results: List[Optional[T]] = [None] * total
        start_time = time.time()
        self.memory_monitor.start_monitoring()
        try:
            if self.threads == 1:
                for index, task in enumerate(tasks):
                    results[index] = task()
                    self._report(progress_callback, index + 1, total)
            else:
                with ThreadPoolExecutor(max_workers=self.threads) as pool:
                    futures = {pool.submit(task): index for index, task in enumerate(tasks)}
                    for done, future in enumerate(as_completed(futures), start=1):
                        results[futures[future]] = future.result()
                        self._report(progress_callback, done, total)
        finally:
            start_mem, peak_mem, end_mem = self.memory_monitor.stop_monitoring()
            elapsed = time.time() - start_time
            self.last_metrics = PerformanceMetrics(
                processing_time=elapsed,
                memory_peak_mb=peak_mem,
                memory_start_mb=start_mem,
                memory_end_mb=end_mem,
                tasks_completed=sum(r is not None for r in results),
                average_task_time=elapsed / total if total else 0.0,
            )
            logger.info("Ran %d tasks on %d thread(s) in %.2f s, peak memory %.1f MB",
                        total, self.threads, elapsed, peak_mem)
        return results

    @staticmethod
    def _report(progress_callback: Optional[Callable[[float, str], None]], done: int, total: int):
        if progress_callback:
            progress_callback(100.0 * done / total, f"Completed {done} of {total}")
