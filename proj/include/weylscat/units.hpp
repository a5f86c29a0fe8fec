// Copyright (c) 2026 weylscat developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace weylscat::units {

// Device units for graphene numbers: energies in eV, lengths in nm, times in
// fs, with the Fermi velocity fixed at 1e6 m/s. Then
//
//   hbar v_F = 6.582119569e-16 eV s * 1e6 m/s = 0.6582119569 eV nm
//   hbar     = 0.6582119569 eV fs
//
// Internally everything runs in natural units hbar = v_F = 1 with energies in
// eV; lengths convert via the natural length hbar v_F / eV.
inline constexpr double hbar_vF_eV_nm = 0.6582119569;
inline constexpr double hbar_eV_fs = 0.6582119569;

inline double length_from_nm(double nm) { return nm / hbar_vF_eV_nm; }
inline double length_to_nm(double natural) { return natural * hbar_vF_eV_nm; }
inline double time_from_fs(double fs) { return fs / hbar_eV_fs; }
inline double time_to_fs(double natural) { return natural * hbar_eV_fs; }

}  // namespace weylscat::units
