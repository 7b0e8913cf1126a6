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
"""
The gjsloss API
---------------

Jensen-Shannon and generalized Jensen-Shannon losses for training under label
noise, numerical certification of their properties, and a desk-scale
experiment harness.

The various elements are organized into modules. You may import them using
their module name as follows:

.. code-block:: python

    import gjsloss.losses

.. no-imported-members
"""
from .__version__ import __version__
