// Copyright 2026 The btq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BTQ_CALCULUS_HPP
#define BTQ_CALCULUS_HPP

#include "btq/kahler_model.hpp"
#include "btq/observable.hpp"

namespace btq {

/// {f, g} = (i / g(z)) (dbar f * d g - d f * dbar g).
///
/// The result evaluates the bracket pointwise from the oracles of f and g.
/// Its own derivatives are finite differences (exact_derivatives() == false).
Observable poisson_bracket(const KahlerModel& model, const Observable& f, const Observable& g);

/// Delta f = g(z)^{-1} d dbar f. With this normalization the Berezin
/// transform reads I^(m) f = f + Delta f / m + O(m^-2) and Delta x3 = -2 x3.
Observable laplacian(const KahlerModel& model, const Observable& f);

/// Attaches finite-difference derivative oracles to a pointwise function.
Observable with_fd_derivatives(std::string label, Observable::Fn eval, bool is_real);

}  // namespace btq

#endif  // BTQ_CALCULUS_HPP
