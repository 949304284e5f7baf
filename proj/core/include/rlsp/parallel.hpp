// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace rlsp {

/// Caps the worker count used by the kernels. Values < 1 restore the runtime default.
void set_num_threads(int threads);
int num_threads();

/// Keeps freed tensor buffers in the process heap instead of handing them back to the OS.
/// Training frees and reallocates the same large buffers every step, and with glibc's
/// defaults each one costs fresh page faults. Call once at startup; no-op off glibc.
void retain_heap_memory();

}  // namespace rlsp
