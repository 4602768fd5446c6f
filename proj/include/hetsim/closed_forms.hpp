#pragma once

// Direct clause-level evaluators for the catalog connectors and for the
// composites that have a known description.

#include <string>

#include "hetsim/functors.hpp"
#include "hetsim/relcore.hpp"

namespace hetsim {

/// Label added by weak_saturate for pure τ* moves.
inline constexpr const char* kEpsilonLabel = "eps";

/// Forth and back: every (l,x)∈S has some (l,y)∈T with x r y, and vice versa.
bool egli_milner_lift(const Rel& r, const PltsTerm& s, const PltsTerm& t);
/// Forth clause only.
bool forth_lift(const Rel& r, const PltsTerm& s, const PltsTerm& t);

/// Whether some distribution on {((l,x),(l,y)) | x r y} has marginals α and β.
/// Decided by exact rational max-flow.
bool coupling_lift(const Rel& r, const DltsTerm& alpha, const DltsTerm& beta);

bool det_id_lift(const Rel& r, const DetTerm& a, const DetTerm& b);
/// Same domain and related images.
bool map_id_lift(const Rel& r, const MapTerm& a, const MapTerm& b);

/// `label_rel` relates labels of S (rows) to labels of T (columns).
bool kr_lift(const Rel& label_rel, const Rel& r, const PltsTerm& s, const PltsTerm& t);
bool lr_lift(const Rel& label_rel, const Rel& r, const PltsTerm& s, const PltsTerm& t);

/// Input clause: ∀ i ∈ dom(δ_I). δ_I(i) r τ_I(i).
bool ioco_in_lift(const Rel& r, const MapTerm& d, const MapTerm& t);
/// Output clause: ∀ o ∈ dom(τ_O). o ∈ dom(δ_O) and δ_O(o) r τ_O(o).
bool ioco_out_lift(const Rel& r, const MapTerm& d, const MapTerm& t);
bool ioco_lift(const Rel& r, const SuspTerm& d, const SuspTerm& t);
/// Shared inputs related, and some shared output related.
bool ioco_compat_lift(const Rel& r, const SuspTerm& d, const SuspTerm& d2);

/// The composite of L_Q after L_R, decided through maximal boxes of r.
/// `rl` relates labels of S to middle labels, `ql` middle labels to labels of U.
bool lqlr_comp_lift(const Rel& ql, const Rel& rl, const Rel& r, const PltsTerm& s, const PltsTerm& u);

/// Some (l,x)∈S and (l,y)∈T with x r y.
bool shared_step_lift(const Rel& r, const PltsTerm& s, const PltsTerm& t);

/// Saturation over labels A ∪ {eps}: y -l-> y' iff τ* l τ*, y -τ-> y' iff τ+,
/// y -eps-> y' iff τ*.
Coalgebra weak_saturate(const Coalgebra& c, const std::string& tau);

}  // namespace hetsim
