/**
 * Module dependencies.
 */

const tty = require('tty');
const util = require('util');

exports.init = init;
exports.log = log;
exports.useColors = useColors;

function useColors() {
  return 'colors' in exports.inspectOpts ?
    Boolean(exports.inspectOpts.colors) :
    tty.isatty(process.stderr.fd);
}

function log(...args) {
  return process.stderr.write(util.format(...args) + '\n');
}

function init(debug) {
  debug.inspectOpts = {};
}

function trimLine(str) {
  return str.trim();
}

module.exports = require('./common')(exports);

const {formatters} = module.exports;

/**
 * Map %o to `util.inspect()`, all on a single line.
 */

exports.formatters.o = function (v) {
  this.inspectOpts.colors = this.useColors;
  return util.inspect(v, this.inspectOpts)
    .split('\n')
    .map(trimLine)
    .join(' ');
};

/**
 * Map %O to `util.inspect()`, allowing multiple lines if needed.
 */

exports.formatters.O = function (v) {
  this.inspectOpts.colors = this.useColors;
  return util.inspect(v, this.inspectOpts);
};
