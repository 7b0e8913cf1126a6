# Copyright 2025 The gjsloss Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import time
from threading import Event, Thread
from typing import Any, Dict, Optional

import psutil

from ..common import format_elapsed_time
from ..logging import warn


class ResourceTracker(Thread):
    """
    Samples this process's memory and CPU time until stopped.
    """

    def __init__(self, interval: float = 0.1, process: Optional[psutil.Process] = None):
        Thread.__init__(self, daemon=True)
        self.process = process or psutil.Process()
        self.interval = interval
        self.peak_rss = 0
        self.peak_threads = 0
        self.cpu_time_user = 0.0
        self.cpu_time_system = 0.0
        self.__started_at = time.perf_counter()
        self.__runtime = 0.0
        self.__stop = Event()

    def sample(self):
        with self.process.oneshot():
            memory = self.process.memory_info()
            cpu_time = self.process.cpu_times()
            threads = self.process.num_threads()
        self.peak_rss = max(self.peak_rss, memory.rss)
        self.peak_threads = max(self.peak_threads, threads)
        self.cpu_time_user = cpu_time.user
        self.cpu_time_system = cpu_time.system
        self.__runtime = time.perf_counter() - self.__started_at

    def run(self):
        try:
            while not self.__stop.is_set():
                self.sample()
                self.__stop.wait(self.interval)
        except psutil.Error as e:
            warn(f"Process resource tracker encountered an error: {e}")

    def stop(self):
        self.__stop.set()
        if self.is_alive():
            self.join()
        try:
            self.sample()
        except psutil.Error:
            pass

    def __enter__(self) -> "ResourceTracker":
        self.start()
        return self

    def __exit__(self, *_):
        self.stop()

    def stats_as_dict(self) -> Dict[str, Any]:
        return {
            "runtime": format_elapsed_time(self.__runtime),
            "runtime_seconds": self.__runtime,
            "cpu_time_user": self.cpu_time_user,
            "cpu_time_system": self.cpu_time_system,
            "peak_memory_rss": self.peak_rss,
            "peak_threads": self.peak_threads,
        }
