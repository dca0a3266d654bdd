#ifndef HEISLAB_HPP
#define HEISLAB_HPP

#include <heislab/approximation.hpp>
#include <heislab/common.hpp>
#include <heislab/forms.hpp>
#include <heislab/gallery.hpp>
#include <heislab/heis_core.hpp>
#include <heislab/hopf.hpp>
#include <heislab/io.hpp>
#include <heislab/lefschetz.hpp>
#include <heislab/linking.hpp>
#include <heislab/parallel.hpp>
#include <heislab/polynomial.hpp>
#include <heislab/quadrature.hpp>
#include <heislab/sphere_mesh.hpp>

#endif  // HEISLAB_HPP
