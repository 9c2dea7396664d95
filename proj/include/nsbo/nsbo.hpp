// nsbo.hpp -- umbrella include for the whole library.
#pragma once

#include <nsbo/bayesnet.hpp>
#include <nsbo/engine.hpp>
#include <nsbo/generator.hpp>
#include <nsbo/instance.hpp>
#include <nsbo/oracle.hpp>
#include <nsbo/rng.hpp>
#include <nsbo/roster.hpp>
#include <nsbo/rules.hpp>
