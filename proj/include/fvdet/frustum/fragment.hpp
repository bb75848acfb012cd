// Copyright 2026 The fvdet Authors
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


#ifndef FVDET__FRUSTUM__FRAGMENT_HPP_
#define FVDET__FRUSTUM__FRAGMENT_HPP_

#include "fvdet/core/geometry.hpp"
#include "fvdet/fvproj/projection.hpp"
#include "fvdet/proposal/box2d.hpp"
#include "fvdet/proposal/codec.hpp"
#include "fvdet/proposal/targets.hpp"

namespace fvdet::frustum
{

/// A front-view box (upscaled map pixels) cut radially to [r1, r2] meters:
/// the cylinder fragment that should contain one object.
struct CylinderFragment
{
  proposal::MapBox box;
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Enlargement applied when turning a proposal into a crop region.
struct FragmentMargins
{
  double radial = 0.0;    // meters added on both ends of [r1, r2]
  double box_scale = 1.0; // multiplies the map box width and height
};

/// Sorts r1/r2, applies margins and clamps to [0, R]. Throws
/// std::invalid_argument for non-finite values or an empty map box.
CylinderFragment make_fragment(const proposal::MapBox & box, double r1, double r2,
                               const fvproj::ProjectionConfig & cfg,
                               const FragmentMargins & margins = {});

CylinderFragment fragment_from_proposal(const proposal::Proposal3D & p,
                                        const fvproj::ProjectionConfig & cfg,
                                        const FragmentMargins & margins = {});

/// Tight front-view box of a 3D box from its angular extent, converted to
/// upscaled map pixels.
proposal::MapBox map_box_of(const Box3D & box, const fvproj::ProjectionConfig & cfg);

/// Minimum and maximum radial distance sqrt(x^2 + y^2) over the box
/// footprint; the minimum is 0 when the footprint contains the sensor.
std::pair<double, double> radial_extent(const Box3D & box);

/// Ground-truth proposal (map box and truncated distances) of a labelled box.
proposal::GroundTruthProposal ground_truth_proposal(const Box3D & box, ClassId cls,
                                                    const fvproj::ProjectionConfig & cfg);

CylinderFragment fragment_from_box(const Box3D & box, const fvproj::ProjectionConfig & cfg,
                                   const FragmentMargins & margins = {});

/// Azimuth of the fragment's map-box center (the frustum bisector).
double fragment_azimuth(const CylinderFragment & frag, const fvproj::ProjectionConfig & cfg);

}  // namespace fvdet::frustum

#endif  // FVDET__FRUSTUM__FRAGMENT_HPP_
