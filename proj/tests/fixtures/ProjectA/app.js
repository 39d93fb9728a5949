'use strict';

const moment = require('moment');
const { buy } = require('./utils/util_b');
const { greet } = require('./utils/util_a');

function main(args) {
  console.log(greet(args[0] || 'world'), moment().format());
  return buy('apple');
}

main(process.argv.slice(2));
