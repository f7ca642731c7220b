"""
Unit tests for the ordered sweep executor and the memory monitor.
"""

import time

import psutil
import pytest

from services.performance_monitor import MemoryMonitor, PerformanceMetrics, SweepExecutor


def _sleepy(value, delay):
    def task():
        time.sleep(delay)
        return value
    return task


class TestSweepExecutor:

    def test_threads_must_be_positive(self):
        with pytest.raises(ValueError):
            SweepExecutor(threads=0)

    @pytest.mark.parametrize('threads', [1, 4])
    def test_results_in_submission_order(self, threads):
        # Later tasks finish first on a pool
        tasks = [_sleepy(i, 0.02 * (5 - i)) for i in range(6)]
        assert SweepExecutor(threads).run(tasks) == list(range(6))

    def test_progress_callback(self, mocker):
        callback = mocker.Mock()
        SweepExecutor(threads=2).run([_sleepy(i, 0.0) for i in range(4)], callback)
        assert callback.call_count == 4
        assert callback.call_args_list[-1].args == (100.0, 'Completed 4 of 4')

    def test_metrics_recorded(self):
        executor = SweepExecutor()
        executor.run([_sleepy('a', 0.0), _sleepy('b', 0.0)])
        metrics = executor.last_metrics
        assert isinstance(metrics, PerformanceMetrics)
        assert metrics.tasks_completed == 2
        assert metrics.memory_peak_mb >= metrics.memory_start_mb

    def test_no_tasks(self):
        executor = SweepExecutor()
        assert executor.run([]) == []
        assert executor.last_metrics.average_task_time == 0.0

    def test_task_failure_propagates(self):
        def broken():
            raise RuntimeError('task failed')

        executor = SweepExecutor(threads=2)
        with pytest.raises(RuntimeError, match='task failed'):
            executor.run([_sleepy(1, 0.0), broken])
        assert executor.last_metrics is not None


class TestMemoryMonitor:

    def test_reports_positive_memory(self):
        assert MemoryMonitor().get_current_memory() > 0

    def test_start_and_stop(self):
        monitor = MemoryMonitor(interval=0.01)
        monitor.start_monitoring()
        time.sleep(0.05)
        start, peak, end = monitor.stop_monitoring()
        assert peak >= max(start, end)
        assert not monitor.monitoring

    def test_psutil_failure_reads_zero(self, mocker):
        monitor = MemoryMonitor()
        mocker.patch.object(psutil.Process, 'memory_info', side_effect=RuntimeError('gone'))
        assert monitor.get_current_memory() == 0.0
