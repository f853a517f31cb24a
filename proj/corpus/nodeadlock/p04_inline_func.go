// Pattern: P4 inline-func
// Expected: NoDeadlock
//
// A function literal bound to a variable runs as a goroutine.
package main

import "fmt"

func main() {
	ch := make(chan string)
	greet := func(name string) {
		ch <- "hello " + name
	}
	go greet("gopher")
	msg := <-ch
	fmt.Println(msg)
}
